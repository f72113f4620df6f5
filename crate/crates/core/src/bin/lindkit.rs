// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! `lindkit` command-line tool; see [`lindkit::cli`].

fn main() {
    std::process::exit(lindkit::cli::main_with_args(std::env::args_os()));
}
