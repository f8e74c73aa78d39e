//! Push-out products, free V-categories, and push-outs along free V-functors.

mod cells;
mod decomp;
mod engine;
mod free;
mod oracle;
mod product;
mod square;

pub use cells::{
    induce_from_cells, induce_functor, pushout_cat, pushout_functor, verify_pasting, CatPushout,
    Cell, PushedFunctor,
};
pub use decomp::{
    decomposition_trace, monoid_pushout, reduced_source, verify_decomposition,
    verify_special_cases, Balanced, Decomposition, FreeAttach, Monoid, MonoidPushout, View,
    ViewStages,
};
pub use engine::{
    expand, pushout_along_free, Attachment, Certificate, Engine, PairStages, PushoutResult,
    PushoutTrace, Term,
};
pub use free::{free_category, free_map, FreeCategoryResult, PathSums};
pub use oracle::{compare_with_oracle, congruence_oracle, Oracle, Word, WordHom};
pub use product::{pushout_product, pushout_product_framed, Factor, PushoutProduct};
pub use square::{
    ladder_equations, product_square, pushout_square, stage_squares, verify_product_associativity,
    verify_product_square, verify_pushout_square, BaseSquare, Square,
};
