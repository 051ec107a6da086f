#![no_main]

use libfuzzer_sys::fuzz_target;
use ergoalg::Event;

fuzz_target!(|data: &[u8]| {
    if let Ok(e) = serde_json::from_slice::<Event>(data) {
        let text = serde_json::to_string(&e).expect("events serialize");
        let back: Event = serde_json::from_str(&text).expect("emitted events parse");
        assert_eq!(back, e);
        let _ = e.measure();
        let _ = e.complement();
    }
});
