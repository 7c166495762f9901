// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use kicked_rotor::cli_io::parse_kbar_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(values) = parse_kbar_range(text) {
        assert!(!values.is_empty() && values.len() <= 10_000);
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }
});
