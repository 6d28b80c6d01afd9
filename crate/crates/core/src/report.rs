//! Serialization helpers shared by certificates and reports.

use serde::Serializer;

use crate::numeric::{fmt_f64, fmt_rational, Rational};

pub(crate) fn ser_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

pub(crate) fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_f64(*x))
}

pub(crate) fn ser_complex<S: Serializer>(z: &num_complex::Complex64, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq([fmt_f64(z.re), fmt_f64(z.im)])
}
