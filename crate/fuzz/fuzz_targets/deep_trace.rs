#![no_main]

use iabc::analysis::analyze;
use iabc::consensus::trace::DeepTrace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(deep) = DeepTrace::from_json(text) else { return };
    let Ok(trace) = deep.to_trace() else { return };
    let again = DeepTrace::from_trace(&trace).to_trace().expect("re-encoded trace decodes");
    assert_eq!(again, trace);
    let _ = analyze(&trace, None);
});
