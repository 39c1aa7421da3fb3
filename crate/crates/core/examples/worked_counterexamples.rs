//! The two built-in worked examples: an even-dimensional category
//! where an object is without weight 0 yet admits no avoiding
//! decomposition, and a weight-degenerate triple with vanishing weight
//! complex. Both obstructions are parity of total homology dimension.

use kbweights::counterexamples::{
    build_even_dim_example, build_triple_example, parity_obstruction_check,
};
use kbweights::weights::Window;

fn main() {
    let (object, report) = build_even_dim_example();
    print!("{}", report);
    if let kbweights::counterexamples::ParityConstrainedObject::EvenDim(m) = &object {
        let parity = parity_obstruction_check(m, Window::new(0, 0).unwrap()).unwrap();
        print!("{}", parity);
        // doubling the object kills the obstruction
        let doubled = m.direct_sum(m);
        let parity2 = parity_obstruction_check(&doubled, Window::new(0, 0).unwrap()).unwrap();
        print!("{}", parity2);
    }
    let (_, triple) = build_triple_example();
    print!("{}", triple);
}
