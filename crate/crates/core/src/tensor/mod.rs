//! Dense operator algebra on qudit tensor-product spaces.

mod eigen;
mod haar;
mod io;
mod operator;

pub use eigen::{hermitian_eigen, residual, HermitianEigen, HERMITIAN_TOL};
pub use haar::{
    haar_unitary, random_density_matrix, random_simplex_point, random_unit_interval,
    random_unit_vector, Rng,
};
pub use io::{QOPB_MAGIC, QOPB_VERSION};
pub use operator::{Operator, SubsystemSet};
