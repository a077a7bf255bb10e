#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "risbeam/synthesis.hpp"

namespace risbeam {

/// Shift-register frame: rows*cols/8 bytes. Byte b holds the elements with
/// row-major linear index 8b..8b+7, MSB first (MSB = lowest index), bit 1 =
/// PIN ON. A 20x20 surface packs into 50 bytes matching the 50-stage 8-bit
/// register chain; for hardware emission the last byte (index 49) is shifted
/// out first so the first-shifted bit lands in the farthest register.
using Frame = std::vector<std::uint8_t>;

inline constexpr int kFrameBytes = 50;  // the 20x20 surface

Frame pack_frame(const BitMap& bits);                     // rows*cols % 8 == 0
BitMap unpack_frame(const Frame& frame, int rows, int cols);

std::string frame_to_hex(const Frame& frame);             // uppercase, 2 chars/byte
Frame frame_from_hex(std::string_view hex);               // throws on bad input

// ---- line-based serial control protocol ----------------------------------
//
//   SET <100 uppercase hex chars>\n     full 50-byte frame
//   STEER <theta> <phi>\n               theta in [0,90), phi in [0,360)
//   FREQ <ghz>\n                        within the configured limits
//   GET\n                               query state
//   RST\n                               reset
//
// Numbers carry at most two decimal places (protocol resolution 0.01).

struct SetFrameCmd {
    Frame frame;  // exactly 50 bytes
    bool operator==(const SetFrameCmd&) const = default;
};
struct SteerCmd {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    bool operator==(const SteerCmd&) const = default;
};
struct FreqCmd {
    double ghz = 0.0;
    bool operator==(const FreqCmd&) const = default;
};
struct QueryStateCmd {
    bool operator==(const QueryStateCmd&) const = default;
};
struct ResetCmd {
    bool operator==(const ResetCmd&) const = default;
};

using Command = std::variant<SetFrameCmd, SteerCmd, FreqCmd, QueryStateCmd, ResetCmd>;

/// FREQ validation range; defaults to the span of the shipped cell table.
struct ProtocolLimits {
    double freq_min_ghz = 20.0;
    double freq_max_ghz = 33.0;
};

enum class ParseErrorCode {
    EmptyLine,
    LineTooLong,
    UnknownVerb,
    MissingArgument,
    TrailingInput,
    BadHexLength,
    NonHexChar,
    MalformedNumber,
    OutOfRange,
};

const char* to_string(ParseErrorCode code);

struct ParseError {
    ParseErrorCode code{};
    std::size_t offset = 0;  // byte offset into the line
    std::string message;
};

struct ParseResult {
    std::optional<Command> command;
    std::optional<ParseError> error;
    bool ok() const { return command.has_value(); }
};

inline constexpr std::size_t kMaxLineLength = 4096;

/// Encodes a command as one terminated line. Throws std::invalid_argument on
/// out-of-range parameters.
std::string encode_command(const Command& cmd, const ProtocolLimits& limits = {});

/// Total on arbitrary bytes: always returns either a command or a structured
/// error, never throws. Exact inverse of encode_command on valid lines.
ParseResult parse_command(std::string_view line, const ProtocolLimits& limits = {}) noexcept;

}  // namespace risbeam
