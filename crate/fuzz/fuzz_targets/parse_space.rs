#![no_main]

use libfuzzer_sys::fuzz_target;
use z2coh::complex::EquivariantCellComplex;

fuzz_target!(|data: &str| {
    if let Ok(x) = EquivariantCellComplex::from_json(data) {
        // Accepted files are valid and serialize back to an equal complex.
        x.validate().expect("parsed complex validates");
        let again = EquivariantCellComplex::from_json(&x.to_json()).expect("round trip parses");
        assert_eq!(again, x);
    }
});
