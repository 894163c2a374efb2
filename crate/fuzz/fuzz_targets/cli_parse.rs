#![no_main]

use clap::Parser;
use gaussmeas_cli::Cli;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let argv = std::iter::once("gaussmeas").chain(text.split_whitespace());
    let _ = Cli::try_parse_from(argv);
});
