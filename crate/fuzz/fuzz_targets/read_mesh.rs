#![no_main]

use amfem::mesh::{read_mesh, write_mesh};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mesh) = read_mesh(text) {
        // anything accepted must survive a write/read cycle
        let back = read_mesh(&write_mesh(&mesh)).expect("re-read of a written mesh");
        assert_eq!(back.num_triangles(), mesh.num_triangles());
        assert_eq!(back.num_edges(), mesh.num_edges());
    }
});
