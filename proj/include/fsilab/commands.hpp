#pragma once

#include <string>

namespace fsilab {

struct CommandOptions {
    std::string config_path;
    std::string out_dir_override;
    bool emit_plotscript = false;
};

// Exit codes: 0 success, 2 config/data error, 3 solver abort.
int cmd_forward(const CommandOptions& opts);
int cmd_inverse(const CommandOptions& opts);
int cmd_sweep(const CommandOptions& opts);
int cmd_convergence(const CommandOptions& opts);
int cmd_oracle(const CommandOptions& opts);

}  // namespace fsilab
