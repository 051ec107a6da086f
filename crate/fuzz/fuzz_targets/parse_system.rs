#![no_main]

use libfuzzer_sys::fuzz_target;
use ergoalg::System;

fuzz_target!(|data: &[u8]| {
    if let Ok(sys) = serde_json::from_slice::<System>(data) {
        let text = serde_json::to_string(&sys).expect("systems serialize");
        let back: System = serde_json::from_str(&text).expect("emitted systems parse");
        assert_eq!(back.map(), sys.map());
        let _ = sys.map().check_depth(64);
    }
});
