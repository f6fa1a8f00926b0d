#![no_main]

use clonelab_core::free::eval_term;
use clonelab_core::parse::parse_term;
use clonelab_core::rewrite::rewrite_normalize;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(term) = parse_term(input) else {
        return;
    };
    // rendering is parseable and stable
    let rendered = term.to_string();
    let reparsed = parse_term(&rendered).expect("rendered term parses");
    assert_eq!(reparsed, term, "render/parse round trip");
    // the two normalization routes agree on anything parseable
    assert_eq!(rewrite_normalize(&term).unwrap(), eval_term(&term));
});
