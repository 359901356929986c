#![no_main]

use libfuzzer_sys::fuzz_target;
use ratiocert::SequenceSpec;

// Anything that parses must print back to a string that parses to the same
// spec.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = s.parse::<SequenceSpec>() {
        let printed = spec.to_string();
        let again: SequenceSpec = printed.parse().expect("display output reparses");
        assert_eq!(spec, again);
        assert!(spec.validate().is_ok());
    }
});
