#![no_main]

use libfuzzer_sys::fuzz_target;
use spectral_twins::io::{parse_graph_file, GraphFile};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(loaded) = parse_graph_file(text) else { return };
    // anything accepted must survive a write/read cycle unchanged
    let again = GraphFile::from_graph(&loaded.graph, loaded.lengths.clone()).to_json();
    let reread = parse_graph_file(&again).expect("written graph file parses");
    assert_eq!(reread.graph, loaded.graph);
    assert_eq!(reread.lengths, loaded.lengths);
});
