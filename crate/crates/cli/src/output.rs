use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use std::fmt::Write as _;
use std::io;

/// 17 significant digits, lowercase exponent.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Pretty printer that writes floats in the fixed format.
struct FixedFloats(PrettyFormatter<'static>);

macro_rules! forward {
    ($($m:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $m<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$m(w $(, $arg)*)
        })*
    };
}

impl Formatter for FixedFloats {
    forward!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        w.write_all(fmt_f64(x).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, x: f32) -> io::Result<()> {
        self.write_f64(w, x.into())
    }
}

/// Pretty JSON with every float in the fixed format.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serializer emits UTF-8"))
}

pub enum Cell<'a> {
    F(f64),
    I(i64),
    S(&'a str),
}

pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            match c {
                Cell::F(x) => self.buf.push_str(&fmt_f64(*x)),
                Cell::I(n) => write!(self.buf, "{n}").unwrap(),
                Cell::S(s) => self.buf.push_str(s),
            }
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-1.0), "-1.0000000000000000e0");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(6.02e23).parse::<f64>().unwrap(), 6.02e23);
    }

    #[test]
    fn json_floats_rewritten_ints_kept() {
        let s = to_json(&serde_json::json!({"j": 3, "e": [-1.5, 2.0], "x": f64::NAN})).unwrap();
        assert!(s.contains("\"j\": 3"));
        assert!(s.contains("\"x\": null"));
        assert!(s.contains("-1.5000000000000000e0"));
        assert!(s.contains("2.0000000000000000e0"));
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["t", "x"]);
        c.row(&[Cell::F(0.5), Cell::S("center")]);
        c.row(&[Cell::I(2), Cell::F(-0.25)]);
        assert_eq!(
            c.finish(),
            "t,x\n5.0000000000000000e-1,center\n2,-2.5000000000000000e-1\n"
        );
    }
}
