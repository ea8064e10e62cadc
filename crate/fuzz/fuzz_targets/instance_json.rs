#![no_main]

use covlab_cli::instance::parse;
use covlab_core::guards::Guards;
use libfuzzer_sys::fuzz_target;

// Accepted documents survive a save/load round trip unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let guards = Guards {
        ground: 16,
        group_cap: 720,
        ..Guards::default()
    };
    if let Ok(inst) = parse(text, &guards) {
        let again = parse(&inst.to_json(), &guards).expect("saved instance reloads");
        assert_eq!(inst.to_json(), again.to_json());
    }
});
