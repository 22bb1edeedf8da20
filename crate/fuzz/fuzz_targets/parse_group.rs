#![no_main]

use libfuzzer_sys::fuzz_target;
use z2coh::FgAbelianGroup;

fuzz_target!(|data: &str| {
    if let Ok(g) = data.parse::<FgAbelianGroup>() {
        let again: FgAbelianGroup = g.to_string().parse().expect("display output parses");
        assert_eq!(again, g);
    }
});
