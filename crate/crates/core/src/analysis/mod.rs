//! Agreement between computed spectra and predicted symbols.

pub mod certificates;
mod compare;
mod functionals;
mod zero;

pub use certificates::{
    acs_certificate, acs_certificate_default, canonical_family, default_ms, default_ns, CertificateCheck, CertificateReport,
    CERTIFICATE_FAMILIES,
};
pub use compare::*;
pub use functionals::*;
pub use zero::*;
