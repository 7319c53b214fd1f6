#![no_main]
use libfuzzer_sys::fuzz_target;
use hz_core::hecke::parse_eigensystem;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_eigensystem(s);
    }
});
