#![no_main]

use libfuzzer_sys::fuzz_target;
use ergoalg::FiniteAlgebra;

fuzz_target!(|data: &[u8]| {
    let _ = serde_json::from_slice::<FiniteAlgebra>(data);
});
