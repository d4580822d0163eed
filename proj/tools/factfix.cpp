// SPDX-License-Identifier: Apache-2.0

#include "factfix/cli.hpp"

int main(int argc, char** argv) { return factfix::cli::dispatch(argc, argv); }
