#![no_main]

use clonelab_core::Element;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(element) = serde_json::from_slice::<Element>(data) else {
        return;
    };
    // decoded values satisfy the structural invariants
    match &element {
        Element::Zero => assert_eq!(element.length(), 0),
        Element::Letter(_) => assert_eq!(element.length(), 1),
        Element::Word { tail, .. } => assert_eq!(element.length(), tail.len() + 1),
    }
    // encoding is canonical and round-trips
    let encoded = serde_json::to_string(&element).unwrap();
    let back: Element = serde_json::from_str(&encoded).unwrap();
    assert_eq!(back, element);
    assert_eq!(serde_json::to_string(&back).unwrap(), encoded);
});
