#![no_main]

use gaussmeas::csv::CsvTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = CsvTable::parse(text) {
        let once = table.render();
        let again = CsvTable::parse(&once).expect("rendered tables parse").render();
        assert_eq!(once, again);
    }
});
