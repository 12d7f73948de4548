#![no_main]

use amfem::report::{format_table, read_table};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = read_table(text) {
        let again = read_table(&format_table(&records, None)).expect("re-read of a written table");
        assert_eq!(again.len(), records.len());
    }
});
