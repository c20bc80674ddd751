//! Arithmetic over `F_q`, in `A = F_q[T]` and in residue fields `A/p`.

pub mod factor;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod residue;
pub mod text;

pub use factor::{
    enumerate_primes, factorize, is_irreducible, monic_at, monic_count, monic_divisors, prime_count,
    set_factor_seed,
    squarefree_decompose,
    Factorization,
};
pub use field::{Fq, FqContext};
pub use matrix::{solve_affine_system, AffineSolution, FqMatrix};
pub use poly::APoly;
pub use residue::{ResidueContext, ResidueElement};
pub use text::{format_apoly, parse_apoly, parse_fq};
