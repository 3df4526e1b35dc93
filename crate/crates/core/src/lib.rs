pub mod configs;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod perm;
pub mod period;
pub mod roots;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    macro_rules! chapters {
        ($($name:ident => $file:literal),* $(,)?) => {
            $(
                #[doc = include_str!(concat!("../../../book/src/", $file))]
                mod $name {}
            )*
        };
    }

    chapters! {
        introduction => "introduction.md",
        lattices => "lattices.md",
        roots => "roots.md",
        configurations => "configurations.md",
        discriminant_forms => "discriminant-forms.md",
        periods => "periods.md",
        census => "census.md",
        command_line => "command-line.md",
    }
}
