//! Exact Bessel-polynomial mixture decompositions, convolution powers, and
//! tail asymptotics of multivariate Student t distributions.

pub(crate) mod dd;
pub mod densities;
pub mod exactpoly;
pub(crate) mod quad;
pub mod sampling;
pub mod specfun;
pub mod tol;
pub mod transforms;
pub mod verify;
