#![no_main]

use libfuzzer_sys::fuzz_target;
use ergoalg::Rational;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(q) = s.parse::<Rational>() {
            // Display must re-parse to the same value.
            let back: Rational = q.to_string().parse().expect("printed rationals parse");
            assert_eq!(back, q);
        }
    }
});
