#![no_main]

use iabc::graph::{parse_graph, write_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_graph(text) {
        let again = parse_graph(&write_graph(&g, None)).expect("canonical form parses");
        assert_eq!(again, g);
    }
});
