//! JSON and CSV helpers shared by the exchange formats.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;

/// Serde adapter for complex vectors as `[[re, im], ...]`.
pub mod complex_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::algebra::C64;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

/// Serde adapter for a single complex number as `[re, im]`.
pub mod complex {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::algebra::C64;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// Prints every float with 17 significant digits in exponent form, so
/// artifacts are byte-stable and parse back to the same bits.
#[derive(Default)]
pub struct FixedFloatFormatter {
    indent: usize,
    has_value: bool,
}

impl FixedFloatFormatter {
    fn write_float<W: ?Sized + Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        if x.is_finite() {
            write!(w, "{x:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn newline<W: ?Sized + Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

// Pretty layout mirrors serde_json's PrettyFormatter.
impl Formatter for FixedFloatFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        self.write_float(w, x)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, x: f32) -> io::Result<()> {
        self.write_float(w, x as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"[")
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Serializes `value` with [`FixedFloatFormatter`].
pub fn to_fixed_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits utf-8"))
}

pub fn write_fixed_json<T: Serialize + ?Sized>(path: &std::path::Path, value: &T) -> Result<()> {
    std::fs::write(path, to_fixed_json(value)?)?;
    Ok(())
}

/// Formats a float for CSV cells with the same 17-digit convention.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_digits() {
        let s =
            to_fixed_json(&serde_json::json!({"x": 0.1, "n": 3, "v": [1.0, -2.5e-20]})).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("-2.4999999999999999e-20"), "{s}");
        assert!(s.contains("\"n\": 3"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn non_finite_becomes_null() {
        let s = to_fixed_json(&[f64::NAN]).unwrap();
        assert!(s.contains("null"));
    }

    #[test]
    fn empty_containers_stay_compact() {
        let s = to_fixed_json(&serde_json::json!({"a": [], "b": {}})).unwrap();
        assert!(s.contains("\"a\": []") && s.contains("\"b\": {}"), "{s}");
    }
}
