//! Linear-combination text form: `3/2*e.h.f - f + 2`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_q, to_short_string, Q};

/// Splits a sum into `(coefficient, body)` terms; `body = None` for scalars.
/// Whitespace is ignored and `−` is accepted as a minus sign.
pub fn split_terms(s: &str) -> Result<Vec<(Q, Option<String>)>> {
    let s: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth > 0 && (ch == '+' || ch == '-') {
            cur.push(ch);
        } else if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('*') {
            pieces.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && cur.is_empty() {
            if ch == '-' {
                neg = !neg;
            }
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    pieces.push((neg, cur));
    let mut out = Vec::new();
    for (neg, p) in pieces {
        let (coef, body) = match p.split_once('*') {
            Some((c, b)) if parse_q(c).is_ok() => (parse_q(c)?, Some(b.to_string())),
            _ => match parse_q(&p) {
                Ok(c) => (c, None),
                Err(_) => (Q::one(), Some(p.clone())),
            },
        };
        if let Some(b) = &body {
            if b.is_empty() {
                return Err(Error::Parse(format!("missing symbol in {s:?}")));
            }
        }
        out.push((if neg { -coef } else { coef }, body));
    }
    Ok(out)
}

/// Inverse of [`split_terms`]; an empty body prints the bare coefficient.
pub fn format_terms<I: IntoIterator<Item = (Q, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if body.is_empty() {
            out.push_str(&to_short_string(&a));
        } else if a.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&to_short_string(&a));
            out.push('*');
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn split_and_format() {
        let t = split_terms(" 3/2*e.h.f − f + 2 ").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], (qr(3, 2), Some("e.h.f".into())));
        assert_eq!(t[1], (q(-1), Some("f".into())));
        assert_eq!(t[2], (q(2), None));
        let s = format_terms(t.into_iter().map(|(c, b)| (c, b.unwrap_or_default())));
        assert_eq!(s, "3/2*e.h.f - f + 2");
        assert_eq!(format_terms(Vec::new()), "0");
        assert!(split_terms("e +").is_err());
        let t = split_terms("2*(e_10+e_01).f - (h_1-h_2)").unwrap();
        assert_eq!(t[0].1.as_deref(), Some("(e_10+e_01).f"));
        assert_eq!(t[1], (q(-1), Some("(h_1-h_2)".into())));
    }
}
