#![no_main]
use libfuzzer_sys::fuzz_target;
use hz_core::sieve::parse_weierstrass;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_weierstrass(s, 11);
    }
});
