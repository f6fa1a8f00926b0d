#![no_main]

use clonelab_core::subst::{parse_substitution, substitute};
use clonelab_core::Element;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(subst) = parse_substitution(input) else {
        return;
    };
    if !subst.is_identity() {
        // the rendered binding list parses back to the same substitution
        assert_eq!(parse_substitution(&subst.to_string()).unwrap(), subst);
    }
    // applying any parsed substitution is total
    for (_, image) in subst.iter() {
        let _ = substitute(image, &subst);
    }
    let _ = substitute(&Element::Zero, &subst);
});
