//! JSON and CSV rendering with every float written to 17 significant
//! digits.

use std::cell::Cell as Flag;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Writes floats as `d.dddddddddddddddde±x` and remembers whether a
/// `null` was emitted. Report types never serialize `None`, so a `null`
/// can only come from a NaN or an infinity.
struct SigDigits<'a> {
    inner: PrettyFormatter<'a>,
    saw_null: &'a Flag<bool>,
}

impl Formatter for SigDigits<'_> {
    fn write_null<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.saw_null.set(true);
        w.write_all(b"null")
    }

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonFinite;

/// Pretty JSON, or `NonFinite` if any float was NaN or infinite.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, NonFinite> {
    let mut buf = Vec::new();
    let saw_null = Flag::new(false);
    let fmt = SigDigits { inner: PrettyFormatter::new(), saw_null: &saw_null };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).expect("report types always serialize");
    if saw_null.get() {
        return Err(NonFinite);
    }
    let mut s = String::from_utf8(buf).expect("serde_json writes UTF-8");
    s.push('\n');
    Ok(s)
}

/// A CSV cell.
pub enum Cell {
    Int(i64),
    Float(f64),
    Missing,
}

/// Header plus rows. Non-finite floats are rejected.
pub fn to_csv(header: &[&str], rows: &[Vec<Cell>]) -> Result<String, NonFinite> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => Ok(i.to_string()),
                Cell::Float(x) if x.is_finite() => Ok(fmt_f64(*x)),
                Cell::Float(_) => Err(NonFinite),
                Cell::Missing => Ok(String::new()),
            })
            .collect::<Result<_, _>>()?;
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        x: f64,
        v: Vec<f64>,
        name: &'static str,
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let s = to_json(&Sample { x: 0.1, v: vec![1.0, -2.5e-300], name: "q" }).unwrap();
        assert!(s.contains("1.0000000000000001e-1"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
        assert_eq!(back["v"][1].as_f64(), Some(-2.5e-300));
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(to_json(&Sample { x: f64::NAN, v: vec![], name: "" }), Err(NonFinite));
        assert_eq!(to_json(&vec![f64::INFINITY]), Err(NonFinite));
        assert!(to_csv(&["a"], &[vec![Cell::Float(f64::NAN)]]).is_err());
        assert_eq!(
            to_csv(&["a", "b", "c"], &[vec![Cell::Int(-3), Cell::Float(0.5), Cell::Missing]]).unwrap(),
            "a,b,c\n-3,5.0000000000000000e-1,\n"
        );
    }
}
