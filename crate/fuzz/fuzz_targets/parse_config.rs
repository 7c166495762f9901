// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use kicked_rotor::cli_io::{config_to_text, parse_config};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for sweeping in [false, true] {
        if let Ok(cfg) = parse_config(text, sweeping) {
            let again = parse_config(&config_to_text(&cfg), sweeping).expect("emitted config parses");
            assert_eq!(again, cfg);
        }
    }
});
