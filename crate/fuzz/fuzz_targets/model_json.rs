#![no_main]

use clonelab_core::models::{check_laws, FiniteModel};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(model) = serde_json::from_slice::<FiniteModel>(data) else {
        return;
    };
    // anything that deserializes is structurally valid: checking the laws
    // must not index out of bounds, whatever the verdict
    let report = check_laws(&model);
    if report.pass {
        let back: FiniteModel =
            serde_json::from_str(&serde_json::to_string(&model).unwrap()).unwrap();
        assert_eq!(back, model);
    }
});
