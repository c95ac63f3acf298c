//! Higher-order abstract syntax on a de Bruijn core, with two
//! specification logics (hereditary Harrop and ordered linear) and two
//! bundled object logics (Mini-ML and a continuation machine).

pub mod contmach;
pub mod error;
pub mod formula;
pub mod harness;
pub mod miniml;
pub mod pretty;
pub mod query;
pub mod search;
pub mod sl_hh;
pub mod sl_olli;
pub mod surface;
pub mod syntax;
pub mod unify;

pub use error::Error;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/terms.md")]
    mod terms {}
    #[doc = include_str!("../../../book/src/provers.md")]
    mod provers {}
    #[doc = include_str!("../../../book/src/miniml.md")]
    mod miniml {}
    #[doc = include_str!("../../../book/src/machine.md")]
    mod machine {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
