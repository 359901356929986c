#![no_main]

use libfuzzer_sys::fuzz_target;
use ratiocert_cli::report::Report;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = Report::from_json(s) {
        let back = Report::from_json(&report.to_json()).expect("re-encoded report decodes");
        assert_eq!(report, back);
        let _ = report.to_text();
        let _ = report.to_csv();
    }
});
