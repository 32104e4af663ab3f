#![no_main]

use iabc::conditions::families::build_fig1;
use iabc::consensus::config::ConfigFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = ConfigFile::parse(text) {
        if let Ok(cfg) = file.resolve(build_fig1()) {
            assert!(cfg.validate().is_ok());
        }
    }
});
