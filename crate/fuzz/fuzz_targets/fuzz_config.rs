//! Fuzzes the JSON config decoder: arbitrary bytes must either parse into a
//! valid manifest or produce a structured error — never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk::config::ConfigFile;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = ConfigFile::from_slice(data) {
        if let Ok(manifest) = cfg.resolve() {
            // Resolved manifests round-trip through serde without panicking.
            let _ = serde_json::to_string(&manifest);
        }
    }
});
