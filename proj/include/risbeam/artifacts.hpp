#pragma once

#include <string>

#include "risbeam/config.hpp"

namespace risbeam {

/// Subcommand dispatch. Writes the declared artifact files (atomically, each
/// starting with a tool/config metadata header) into the output directory and
/// returns the process exit status: 0 on success, nonzero with a single-line
/// "error: ..." on stderr otherwise.
struct DispatchOptions {
    std::string out_dir;     // overrides config output_dir when non-empty
    std::string input_path;  // protocol-check transcript
    bool all_off = false;    // codebook: emit the all-OFF baseline frame
    bool quiet = false;
};

int dispatch(const std::string& subcommand, const ScenarioConfig& cfg,
             const DispatchOptions& opts = {});

}  // namespace risbeam
