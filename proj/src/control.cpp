#include "risbeam/control.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace risbeam {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;  // lowercase intentionally rejected: grammar is uppercase
}

/// Rounds to the protocol resolution of 0.01 and renders without trailing
/// zeros ("30", "30.5", "30.46").
std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

const char* to_string(ParseErrorCode code) {
    switch (code) {
        case ParseErrorCode::EmptyLine: return "empty-line";
        case ParseErrorCode::LineTooLong: return "line-too-long";
        case ParseErrorCode::UnknownVerb: return "unknown-verb";
        case ParseErrorCode::MissingArgument: return "missing-argument";
        case ParseErrorCode::TrailingInput: return "trailing-input";
        case ParseErrorCode::BadHexLength: return "bad-hex-length";
        case ParseErrorCode::NonHexChar: return "non-hex-char";
        case ParseErrorCode::MalformedNumber: return "malformed-number";
        case ParseErrorCode::OutOfRange: return "out-of-range";
    }
    return "unknown";
}

Frame pack_frame(const BitMap& bits) {
    const std::size_t n = bits.size();
    if (n % 8 != 0)
        throw std::invalid_argument("pack_frame: element count must be divisible by 8");
    Frame frame(n / 8, 0);
    for (std::size_t linear = 0; linear < n; ++linear) {
        if (bits[linear] == CellState::On)
            frame[linear / 8] |= static_cast<std::uint8_t>(0x80u >> (linear % 8));
    }
    return frame;
}

BitMap unpack_frame(const Frame& frame, int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("unpack_frame: rows and cols must be >= 1");
    if (static_cast<std::size_t>(rows) * cols != frame.size() * 8)
        throw std::invalid_argument("unpack_frame: rows*cols does not match the frame size");
    BitMap bits(rows, cols);
    for (std::size_t linear = 0; linear < bits.size(); ++linear) {
        const bool on = frame[linear / 8] & (0x80u >> (linear % 8));
        bits[linear] = on ? CellState::On : CellState::Off;
    }
    return bits;
}

std::string frame_to_hex(const Frame& frame) {
    static const char digits[] = "0123456789ABCDEF";
    std::string hex;
    hex.reserve(frame.size() * 2);
    for (std::uint8_t b : frame) {
        hex += digits[b >> 4];
        hex += digits[b & 0x0F];
    }
    return hex;
}

Frame frame_from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw std::invalid_argument("frame_from_hex: odd number of hex characters");
    Frame frame(hex.size() / 2, 0);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const int v = hex_value(hex[i]);
        if (v < 0) throw std::invalid_argument("frame_from_hex: non-hex character");
        frame[i / 2] = static_cast<std::uint8_t>(frame[i / 2] << 4 | v);
    }
    return frame;
}

std::string encode_command(const Command& cmd, const ProtocolLimits& limits) {
    struct Encoder {
        const ProtocolLimits& limits;

        std::string operator()(const SetFrameCmd& c) const {
            if (c.frame.size() != kFrameBytes)
                throw std::invalid_argument("encode_command: SET frame must be 50 bytes");
            return "SET " + frame_to_hex(c.frame) + "\n";
        }
        std::string operator()(const SteerCmd& c) const {
            const double th = round2(c.theta_deg);
            const double ph = round2(c.phi_deg);
            if (th < 0.0 || th >= 90.0)
                throw std::invalid_argument("encode_command: STEER theta outside [0, 90)");
            if (ph < 0.0 || ph >= 360.0)
                throw std::invalid_argument("encode_command: STEER phi outside [0, 360)");
            return "STEER " + format_number(th) + " " + format_number(ph) + "\n";
        }
        std::string operator()(const FreqCmd& c) const {
            const double g = round2(c.ghz);
            if (g < limits.freq_min_ghz || g > limits.freq_max_ghz)
                throw std::invalid_argument("encode_command: FREQ outside the configured band");
            return "FREQ " + format_number(g) + "\n";
        }
        std::string operator()(const QueryStateCmd&) const { return "GET\n"; }
        std::string operator()(const ResetCmd&) const { return "RST\n"; }
    };
    return std::visit(Encoder{limits}, cmd);
}

namespace {

struct Cursor {
    std::string_view line;
    std::size_t pos = 0;

    bool done() const { return pos >= line.size(); }
    char peek() const { return line[pos]; }
};

ParseResult fail(ParseErrorCode code, std::size_t offset, std::string msg) {
    ParseResult r;
    r.error = ParseError{code, offset, std::move(msg)};
    return r;
}

/// Strict protocol number: digits, optionally '.' and at most two more
/// digits. Returns false on malformed input.
bool parse_protocol_number(std::string_view tok, double& out) {
    if (tok.empty()) return false;
    std::size_t i = 0;
    while (i < tok.size() && tok[i] >= '0' && tok[i] <= '9') ++i;
    if (i == 0) return false;
    if (i < tok.size()) {
        if (tok[i] != '.') return false;
        ++i;
        std::size_t frac = 0;
        while (i < tok.size() && tok[i] >= '0' && tok[i] <= '9') {
            ++i;
            ++frac;
        }
        if (frac == 0 || frac > 2 || i != tok.size()) return false;
    }
    out = std::stod(std::string(tok));
    return true;
}

}  // namespace

ParseResult parse_command(std::string_view line, const ProtocolLimits& limits) noexcept {
    try {
        if (line.size() > kMaxLineLength)
            return fail(ParseErrorCode::LineTooLong, kMaxLineLength,
                        "line exceeds " + std::to_string(kMaxLineLength) + " bytes");

        // strip one trailing newline (optionally preceded by CR)
        if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) return fail(ParseErrorCode::EmptyLine, 0, "empty line");

        const std::size_t verb_end = std::min(line.find(' '), line.size());
        const std::string_view verb = line.substr(0, verb_end);

        auto token_at = [&](std::size_t start, std::size_t& end) -> std::string_view {
            end = std::min(line.find(' ', start), line.size());
            return line.substr(start, end - start);
        };

        if (verb == "RST" || verb == "GET") {
            if (verb_end != line.size())
                return fail(ParseErrorCode::TrailingInput, verb_end,
                            "unexpected input after verb");
            if (verb == "RST") return ParseResult{Command{ResetCmd{}}, std::nullopt};
            return ParseResult{Command{QueryStateCmd{}}, std::nullopt};
        }

        if (verb == "SET") {
            if (verb_end == line.size())
                return fail(ParseErrorCode::MissingArgument, verb_end, "SET needs a hex payload");
            std::size_t end;
            const std::string_view hex = token_at(verb_end + 1, end);
            if (end != line.size())
                return fail(ParseErrorCode::TrailingInput, end, "unexpected input after payload");
            if (hex.size() != 2 * kFrameBytes)
                return fail(ParseErrorCode::BadHexLength, verb_end + 1,
                            "hex payload length " + std::to_string(hex.size()) + " != 100");
            for (std::size_t i = 0; i < hex.size(); ++i)
                if (hex_value(hex[i]) < 0)
                    return fail(ParseErrorCode::NonHexChar, verb_end + 1 + i,
                                "non-hex character in payload");
            return ParseResult{Command{SetFrameCmd{frame_from_hex(hex)}}, std::nullopt};
        }

        if (verb == "STEER") {
            if (verb_end == line.size())
                return fail(ParseErrorCode::MissingArgument, verb_end, "STEER needs theta and phi");
            std::size_t end1;
            const std::string_view t1 = token_at(verb_end + 1, end1);
            if (end1 == line.size())
                return fail(ParseErrorCode::MissingArgument, end1, "STEER needs phi");
            std::size_t end2;
            const std::string_view t2 = token_at(end1 + 1, end2);
            if (end2 != line.size())
                return fail(ParseErrorCode::TrailingInput, end2, "unexpected input after phi");
            double theta, phi;
            if (!parse_protocol_number(t1, theta))
                return fail(ParseErrorCode::MalformedNumber, verb_end + 1,
                            "malformed theta '" + std::string(t1) + "'");
            if (!parse_protocol_number(t2, phi))
                return fail(ParseErrorCode::MalformedNumber, end1 + 1,
                            "malformed phi '" + std::string(t2) + "'");
            if (theta >= 90.0)
                return fail(ParseErrorCode::OutOfRange, verb_end + 1, "theta outside [0, 90)");
            if (phi >= 360.0)
                return fail(ParseErrorCode::OutOfRange, end1 + 1, "phi outside [0, 360)");
            return ParseResult{Command{SteerCmd{theta, phi}}, std::nullopt};
        }

        if (verb == "FREQ") {
            if (verb_end == line.size())
                return fail(ParseErrorCode::MissingArgument, verb_end, "FREQ needs a value");
            std::size_t end;
            const std::string_view tok = token_at(verb_end + 1, end);
            if (end != line.size())
                return fail(ParseErrorCode::TrailingInput, end, "unexpected input after value");
            double ghz;
            if (!parse_protocol_number(tok, ghz))
                return fail(ParseErrorCode::MalformedNumber, verb_end + 1,
                            "malformed frequency '" + std::string(tok) + "'");
            if (ghz < limits.freq_min_ghz || ghz > limits.freq_max_ghz)
                return fail(ParseErrorCode::OutOfRange, verb_end + 1,
                            "frequency outside the configured band");
            return ParseResult{Command{FreqCmd{ghz}}, std::nullopt};
        }

        return fail(ParseErrorCode::UnknownVerb, 0, "unknown verb '" + std::string(verb) + "'");
    } catch (const std::exception& e) {
        // stod overflow and friends; still a structured result
        return fail(ParseErrorCode::MalformedNumber, 0, e.what());
    }
}

}  // namespace risbeam
