//! Proof terms for string rewrite systems and three interchangeable
//! canonical views of their causal equivalence: trace graphs (tragrs),
//! greedy multistep reductions and flattened step reductions.
//!
//! ```
//! use tragr::{equiv, parse_proofterm, parse_system};
//!
//! let sys = parse_system("alphabet: A B\nrules:\n alpha: B B -> A\n beta: A A B -> B A A B").unwrap();
//! let p = parse_proofterm("A alpha A A B . A A beta", &sys).unwrap();
//! let q = parse_proofterm("A alpha beta", &sys).unwrap();
//! assert!(equiv(&p, &q));
//! ```

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod evolution;
pub mod logicality;
pub mod proofterm;
pub mod residuals;
pub mod system;
pub mod toposort;
pub mod tragr;

pub use equivalence::{
    canonical_greedy, canonical_greedy_by_swapping, equiv, oracle_equiv, oracle_search,
    OracleVerdict,
};
pub use error::{Error, Result};
pub use evolution::render_evolution;
pub use logicality::{embed, flatten};
pub use proofterm::{
    classify, parse_proofterm, pretty_print, src_tgt, to_multistep, to_reduction, Class, Item,
    Multistep, MultistepReduction, Node, ProofTerm,
};
pub use residuals::{
    find_loath, greedy_normalize, is_greedy, layer_measure, loath_witnesses, residual,
    rule_intervals, select, sr_measure, swap, Interval, OccurrenceSet, Side, SwapWitness,
};
pub use system::{concat, parse_system, LString, Letter, RewriteSystem, Rule, Symbol};
pub use toposort::{minimal_layer, ts, ts_stages, Layer, LayerEntry};
pub use tragr::{
    eval, eval_reduction, juxt_tragr, parse_tragr, serialize_tragr, to_dot, tragr_eq, vcomp_tragr,
    Edge, Endpoint, Tragr,
};
