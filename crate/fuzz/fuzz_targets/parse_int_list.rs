#![no_main]

use bohrlab_cli::IntList;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(list) = s.parse::<IntList>() {
        let again: IntList = list.to_string().parse().expect("display output parses");
        assert_eq!(again, list);
    }
});
