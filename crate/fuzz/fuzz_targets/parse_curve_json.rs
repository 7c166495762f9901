// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use kicked_rotor::cli_io::{emit_curve, parse_curve_json, OutputFormat};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(curve) = parse_curve_json(data) {
        let _ = emit_curve(&curve, OutputFormat::Csv);
        if let Ok(bytes) = emit_curve(&curve, OutputFormat::Json) {
            // non-finite values do not survive JSON, everything else must
            if let Ok(again) = parse_curve_json(&bytes) {
                assert_eq!(emit_curve(&again, OutputFormat::Json).ok(), Some(bytes));
            }
        }
    }
});
