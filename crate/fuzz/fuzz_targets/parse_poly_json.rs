#![no_main]

use bohrlab::polynomial::HomPoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = HomPoly::from_json(s) {
        let again = HomPoly::from_json(&p.to_json()).expect("own output parses");
        assert_eq!(again.to_json(), p.to_json());
    }
});
