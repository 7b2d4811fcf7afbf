pub mod charclass;
pub mod counting;
pub mod exactq;
pub mod fibration;
pub mod lattice;
pub mod modforms;

pub type Rational = num_rational::BigRational;

// The guide's snippets run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/modular-forms.md")]
    mod modular_forms {}
    #[doc = include_str!("../../../book/src/characteristic-classes.md")]
    mod characteristic_classes {}
    #[doc = include_str!("../../../book/src/fibrations.md")]
    mod fibrations {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
