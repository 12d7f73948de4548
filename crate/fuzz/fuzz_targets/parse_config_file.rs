#![no_main]

use amfem::report::config::parse_config_file;
use amfem::report::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pairs) = parse_config_file(text) {
        let Ok(mut config) = RunConfig::for_problem("example1") else { return };
        for (k, v) in &pairs {
            let _ = config.apply(k, v);
        }
        let _ = config.validate();
    }
});
