#![no_main]

use gaussmeas::sweep::FigureId;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(id) = text.parse::<FigureId>() {
        assert_eq!(id.as_str(), text);
    }
});
