//! JSON round trip for complexes and chain maps: string degree keys,
//! row-major matrices, fractions as "a/b" strings.

use kbweights::complex::{ChainMap, Complex};
use kbweights::doc::{ComplexDocument, MapDocument};
use kbweights::linalg::Coefficients;

fn main() {
    let c = Complex::from_data(
        Coefficients::Integers,
        &[(0, 2), (1, 1)],
        &[(0, vec![vec![2, 4]])],
    );
    let doc = ComplexDocument::from_complex(&c);
    let text = serde_json::to_string_pretty(&doc).unwrap();
    println!("{}", text);
    let back: ComplexDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_complex().unwrap(), c);

    let g = ChainMap::identity(&c);
    let map_text = serde_json::to_string(&MapDocument::from_map(&g)).unwrap();
    let parsed: MapDocument = serde_json::from_str(&map_text).unwrap();
    assert_eq!(parsed.to_map().unwrap(), g);
    println!("map document round trip ok ({} bytes)", map_text.len());

    // malformed input is rejected with a located error
    let bad = r#"{"coefficients":"Z","degrees":{"0":1,"1":1,"2":1},
        "differentials":{"0":[[1]],"1":[[1]]}}"#;
    let doc: ComplexDocument = serde_json::from_str(bad).unwrap();
    println!("bad document: {}", doc.to_complex().unwrap_err());
}
