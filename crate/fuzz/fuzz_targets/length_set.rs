#![no_main]

use clonelab_core::clones::LengthSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(set) = LengthSet::parse(input) else {
        return;
    };
    assert!(set.lengths().iter().all(|&n| n >= 2));
    assert!(set.lengths().iter().all(|&n| n <= set.bound()));
    // rendering round-trips
    assert_eq!(LengthSet::parse(&set.to_string()).unwrap(), set);
});
