#pragma once

namespace rieszlab {

// Full command-line front end; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace rieszlab
