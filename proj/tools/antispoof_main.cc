// tools/antispoof_main.cc
//
// Copyright 2026 the antispoof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "antispoof/cli.hpp"

int main(int argc, char** argv) { return antispoof::cli::run_subcommand(argc, argv); }
