#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "risbeam/control.hpp"

using namespace risbeam;

namespace {

BitMap random_bitmap(std::mt19937& rng, int rows = 20, int cols = 20) {
    BitMap bits(rows, cols);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t n = 0; n < bits.size(); ++n)
        bits[n] = coin(rng) ? CellState::On : CellState::Off;
    return bits;
}

}  // namespace

TEST_CASE("frame packing convention") {
    BitMap off(20, 20, CellState::Off);
    const Frame zero = pack_frame(off);
    REQUIRE(zero.size() == 50);
    for (std::uint8_t b : zero) CHECK(b == 0x00);

    BitMap one = off;
    one.at(0, 0) = CellState::On;  // element (1,1)
    const Frame f = pack_frame(one);
    CHECK(f[0] == 0x80);
    for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] == 0x00);

    // second element of the first row lands on the next bit down
    BitMap two = off;
    two.at(0, 1) = CellState::On;
    CHECK(pack_frame(two)[0] == 0x40);

    CHECK_THROWS_AS(pack_frame(BitMap(3, 3, CellState::Off)), std::invalid_argument);
}

TEST_CASE("frame unpacking inverts packing") {
    CHECK(unpack_frame(Frame(50, 0x00), 20, 20) == BitMap(20, 20, CellState::Off));
    CHECK(unpack_frame(Frame(50, 0xFF), 20, 20) == BitMap(20, 20, CellState::On));
    CHECK_THROWS_AS(unpack_frame(Frame(50, 0x00), 20, 19), std::invalid_argument);
    CHECK_THROWS_AS(unpack_frame(Frame(49, 0x00), 20, 20), std::invalid_argument);

    std::mt19937 rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const BitMap bits = random_bitmap(rng);
        CHECK(unpack_frame(pack_frame(bits), 20, 20) == bits);
    }
    // other shapes divisible by 8
    for (auto [r, c] : {std::pair{4, 8}, {8, 8}, {2, 12}}) {
        const BitMap bits = random_bitmap(rng, r, c);
        CHECK(unpack_frame(pack_frame(bits), r, c) == bits);
    }
}

TEST_CASE("hex frame serialization") {
    CHECK(frame_to_hex(Frame(50, 0xFF)) == std::string(100, 'F'));
    CHECK(frame_to_hex(Frame{0x01, 0xAB}) == "01AB");
    CHECK(frame_from_hex("01AB") == Frame{0x01, 0xAB});
    CHECK_THROWS_AS(frame_from_hex("01A"), std::invalid_argument);
    CHECK_THROWS_AS(frame_from_hex("0G"), std::invalid_argument);
    std::mt19937 rng(43);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int trial = 0; trial < 200; ++trial) {
        Frame f(50);
        for (auto& b : f) b = static_cast<std::uint8_t>(byte(rng));
        CHECK(frame_from_hex(frame_to_hex(f)) == f);
    }
}

TEST_CASE("command encoding grammar") {
    CHECK(encode_command(ResetCmd{}) == "RST\n");
    CHECK(encode_command(QueryStateCmd{}) == "GET\n");
    CHECK(encode_command(SteerCmd{30.0, 0.0}) == "STEER 30 0\n");
    CHECK(encode_command(SteerCmd{12.5, 271.25}) == "STEER 12.5 271.25\n");
    CHECK(encode_command(FreqCmd{27.5}) == "FREQ 27.5\n");
    CHECK(encode_command(SetFrameCmd{Frame(50, 0xFF)}) == "SET " + std::string(100, 'F') + "\n");

    CHECK_THROWS_AS(encode_command(SteerCmd{90.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(encode_command(SteerCmd{-1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(encode_command(SteerCmd{10.0, 360.0}), std::invalid_argument);
    CHECK_THROWS_AS(encode_command(FreqCmd{55.0}), std::invalid_argument);
    CHECK_THROWS_AS(encode_command(SetFrameCmd{Frame(49, 0x00)}), std::invalid_argument);
}

TEST_CASE("command parsing: valid lines") {
    const ParseResult get = parse_command("GET\n");
    REQUIRE(get.ok());
    CHECK(std::holds_alternative<QueryStateCmd>(*get.command));

    const ParseResult rst = parse_command("RST");  // newline optional
    REQUIRE(rst.ok());
    CHECK(std::holds_alternative<ResetCmd>(*rst.command));

    const ParseResult steer = parse_command("STEER 30.5 120\n");
    REQUIRE(steer.ok());
    CHECK(std::get<SteerCmd>(*steer.command).theta_deg == doctest::Approx(30.5));
    CHECK(std::get<SteerCmd>(*steer.command).phi_deg == doctest::Approx(120.0));

    const ParseResult freq = parse_command("FREQ 24.25\n");
    REQUIRE(freq.ok());
    CHECK(std::get<FreqCmd>(*freq.command).ghz == doctest::Approx(24.25));

    const ParseResult set = parse_command("SET " + std::string(100, '0') + "\n");
    REQUIRE(set.ok());
    CHECK(std::get<SetFrameCmd>(*set.command).frame == Frame(50, 0x00));
}

TEST_CASE("command parsing: diagnostics carry codes and offsets") {
    const ParseResult bad_hex = parse_command("SET ABC\n");
    REQUIRE_FALSE(bad_hex.ok());
    CHECK(bad_hex.error->code == ParseErrorCode::BadHexLength);
    CHECK(bad_hex.error->message.find('3') != std::string::npos);
    CHECK(bad_hex.error->offset == 4);

    std::string low = "SET " + std::string(100, 'f') + "\n";  // lowercase is invalid
    const ParseResult nonhex = parse_command(low);
    REQUIRE_FALSE(nonhex.ok());
    CHECK(nonhex.error->code == ParseErrorCode::NonHexChar);
    CHECK(nonhex.error->offset == 4);

    const ParseResult verb = parse_command("PING 1\n");
    REQUIRE_FALSE(verb.ok());
    CHECK(verb.error->code == ParseErrorCode::UnknownVerb);
    CHECK(verb.error->offset == 0);

    const ParseResult range = parse_command("STEER 95 0\n");
    REQUIRE_FALSE(range.ok());
    CHECK(range.error->code == ParseErrorCode::OutOfRange);

    const ParseResult malformed = parse_command("STEER 1e2 0\n");
    REQUIRE_FALSE(malformed.ok());
    CHECK(malformed.error->code == ParseErrorCode::MalformedNumber);

    const ParseResult decimals = parse_command("FREQ 27.505\n");  // three decimals
    REQUIRE_FALSE(decimals.ok());
    CHECK(decimals.error->code == ParseErrorCode::MalformedNumber);

    const ParseResult missing = parse_command("STEER 10\n");
    REQUIRE_FALSE(missing.ok());
    CHECK(missing.error->code == ParseErrorCode::MissingArgument);

    const ParseResult trailing = parse_command("GET now\n");
    REQUIRE_FALSE(trailing.ok());
    CHECK(trailing.error->code == ParseErrorCode::TrailingInput);

    const ParseResult empty = parse_command("\n");
    REQUIRE_FALSE(empty.ok());
    CHECK(empty.error->code == ParseErrorCode::EmptyLine);

    const ParseResult too_long = parse_command(std::string(5000, 'A'));
    REQUIRE_FALSE(too_long.ok());
    CHECK(too_long.error->code == ParseErrorCode::LineTooLong);
}

TEST_CASE("encode/parse round-trip on randomized commands") {
    std::mt19937 rng(47);
    std::uniform_int_distribution<int> kind(0, 4);
    std::uniform_int_distribution<int> centi(0, 8999);
    std::uniform_int_distribution<int> phi_centi(0, 35999);
    std::uniform_int_distribution<int> freq_centi(2000, 3300);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int trial = 0; trial < 1000; ++trial) {
        Command cmd;
        switch (kind(rng)) {
            case 0: cmd = ResetCmd{}; break;
            case 1: cmd = QueryStateCmd{}; break;
            case 2: cmd = SteerCmd{centi(rng) / 100.0, phi_centi(rng) / 100.0}; break;
            case 3: cmd = FreqCmd{freq_centi(rng) / 100.0}; break;
            default: {
                Frame f(50);
                for (auto& b : f) b = static_cast<std::uint8_t>(byte(rng));
                cmd = SetFrameCmd{f};
            }
        }
        const std::string line = encode_command(cmd);
        const ParseResult r = parse_command(line);
        REQUIRE(r.ok());
        CHECK(*r.command == cmd);
    }
}

TEST_CASE("parser is total on arbitrary bytes") {
    std::mt19937 rng(53);
    std::uniform_int_distribution<int> len(0, 64);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> mode(0, 3);
    int structured = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::string line;
        const int m = mode(rng);
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            if (m == 0)
                line += static_cast<char>(byte(rng));  // raw bytes incl. NUL
            else if (m == 1)
                line += static_cast<char>(' ' + byte(rng) % 95);  // printable
            else if (m == 2)
                line += "SET STEER FREQ GET RST 0123456789.ABCDEF "[byte(rng) % 40];
            else
                line += static_cast<char>(byte(rng) % 2 ? 0xFF : 0x00);
        }
        const ParseResult r = parse_command(line);
        CHECK((r.command.has_value() || r.error.has_value()));
        CHECK_FALSE((r.command.has_value() && r.error.has_value()));
        if (r.error || r.command) ++structured;
    }
    CHECK(structured == 10000);

    // oversized input is rejected up front, bounded by kMaxLineLength
    std::string huge(1 << 20, 'Z');
    const ParseResult r = parse_command(huge);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->code == ParseErrorCode::LineTooLong);
}
