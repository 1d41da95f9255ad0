// include/antispoof/cli.hpp
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef ANTISPOOF_CLI_HPP_
#define ANTISPOOF_CLI_HPP_

namespace antispoof::cli {

// Toolkit entry point. Exit status: 0 success, 1 operation failure,
// 2 usage error.
int run_subcommand(int argc, const char* const* argv);

}  // namespace antispoof::cli

#endif  // ANTISPOOF_CLI_HPP_
