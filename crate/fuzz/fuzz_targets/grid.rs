#![no_main]

use covlab_cli::instance::GridSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = GridSpec::parse(text) {
        if let Ok(grid) = spec.grid() {
            assert!(grid.radii().windows(2).all(|w| w[0] > w[1]));
        }
    }
});
