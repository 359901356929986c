#![no_main]

use libfuzzer_sys::fuzz_target;

// Argument vectors are NUL-separated. Large numeric arguments and the full
// suite are skipped to keep each input fast, and --out so nothing touches disk.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let args: Vec<&str> = s.split('\0').collect();
    if args
        .iter()
        .any(|a| a.parse::<u64>().is_ok_and(|n| n > 500))
    {
        return;
    }
    if args
        .iter()
        .any(|a| *a == "paper-suite" || a.starts_with("--out"))
    {
        return;
    }
    let out = ratiocert_cli::run(
        std::iter::once("ratiocert").chain(args.iter().copied()),
        None,
    );
    assert!([0, 1, 2, 64].contains(&out.code), "exit code {}", out.code);
    if out.code != 64
        && args.windows(2).any(|w| w == ["--format", "json"])
        && !out.stdout.is_empty()
    {
        ratiocert_cli::report::Report::from_json(&out.stdout).expect("json output decodes");
    }
});
