#![no_main]

use bohrlab::polynomial::TruncatedSeries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = TruncatedSeries::from_json(s) {
        let again = TruncatedSeries::from_json(&f.to_json()).expect("own output parses");
        assert_eq!(again.to_json(), f.to_json());
    }
});
