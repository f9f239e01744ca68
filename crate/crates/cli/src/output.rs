//! Number formatting and the small JSON/CSV writers.
//!
//! All reals go through one formatter — shortest representation capped at
//! 15 significant digits — so JSON reports, CSV sweeps, and their tests
//! agree byte-for-byte. Infinities are spelled "inf" (a bare token in CSV,
//! a string in JSON).

/// 15-significant-digit decimal; positional notation while the exponent
/// stays in [−4, 14], scientific outside.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.14e}", x);
    let (mant, exp) = sci.split_once('e').expect("std float formatting");
    let exp: i32 = exp.parse().expect("std float exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if neg { "-" } else { "" };

    let body = if (-4..=14).contains(&exp) {
        if exp < 0 {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("0.{zeros}{digits}")
        } else {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                let pad = "0".repeat(int_len - digits.len());
                format!("{digits}{pad}")
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        }
    } else if digits.len() == 1 {
        format!("{digits}e{exp}")
    } else {
        format!("{}.{}e{exp}", &digits[..1], &digits[1..])
    };
    format!("{sign}{body}")
}

#[derive(Debug, Clone)]
pub enum Json {
    Num(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    Null,
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

fn escape(s: &str, out: &mut String) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn render(v: &Json, indent: usize, out: &mut String) {
    match v {
        Json::Num(x) if x.is_finite() => out.push_str(&format_real(*x)),
        // JSON has no infinities; keep the CLI spelling as a string.
        Json::Num(x) => escape(&format_real(*x), out),
        Json::Int(i) => out.push_str(&i.to_string()),
        Json::Str(s) => escape(s, out),
        Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Json::Null => out.push_str("null"),
        Json::Arr(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render(item, indent, out);
            }
            out.push(']');
        }
        Json::Obj(fields) => {
            out.push_str("{\n");
            let pad = "  ".repeat(indent + 1);
            for (i, (key, val)) in fields.iter().enumerate() {
                out.push_str(&pad);
                escape(key, out);
                out.push_str(": ");
                render(val, indent + 1, out);
                if i + 1 < fields.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

pub fn to_json(v: &Json) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out.push('\n');
    out
}

/// CSV cell for one JSON scalar; the same real formatter keeps sweep rows
/// bit-identical to report fields.
pub fn csv_cell(v: &Json) -> String {
    match v {
        Json::Num(x) => format_real(*x),
        Json::Int(i) => i.to_string(),
        Json::Str(s) => s.clone(),
        Json::Bool(b) => if *b { "true" } else { "false" }.to_string(),
        Json::Null => String::new(),
        Json::Arr(_) | Json::Obj(_) => panic!("CSV cells are scalars"),
    }
}
