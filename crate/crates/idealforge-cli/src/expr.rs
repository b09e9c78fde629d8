//! The `k` input grammar: `decimal | 0xHEX | 2^a | 2^a+b | 2^a-b`,
//! with a single additive term. Interesting inputs are astronomically
//! large, so powers of two get first-class syntax.

use idealforge::Nat;
use num_traits::One;

/// Largest accepted exponent in `2^a` expressions; beyond this the value
/// itself would not be materializable.
const MAX_EXPONENT: u64 = 10_000_000;

pub fn parse_k_expr(text: &str) -> Result<Nat, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty k expression".into());
    }
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        return Nat::parse_bytes(hex.as_bytes(), 16)
            .ok_or_else(|| format!("invalid hex literal: {s}"));
    }
    if let Some(rest) = s.strip_prefix("2^") {
        let split = rest.char_indices().find(|(_, c)| *c == '+' || *c == '-');
        let (exp_text, tail) = match split {
            Some((i, c)) => (&rest[..i], Some((c, &rest[i + 1..]))),
            None => (rest, None),
        };
        let exponent: u64 = exp_text
            .trim()
            .parse()
            .map_err(|_| format!("invalid exponent in {s}"))?;
        if exponent > MAX_EXPONENT {
            return Err(format!("exponent {exponent} exceeds the limit {MAX_EXPONENT}"));
        }
        let base = Nat::one() << exponent;
        return match tail {
            None => Ok(base),
            Some((op, b_text)) => {
                let b_text = b_text.trim();
                if b_text.contains(['+', '-']) {
                    return Err(format!("only a single +b or -b term is supported: {s}"));
                }
                let b: Nat = b_text
                    .parse()
                    .map_err(|_| format!("invalid offset in {s}"))?;
                if op == '+' {
                    Ok(base + b)
                } else if b > base {
                    Err(format!("{s} is negative"))
                } else {
                    Ok(base - b)
                }
            }
        };
    }
    s.parse()
        .map_err(|_| format!("invalid k expression: {s} (expected decimal, 0xHEX or 2^a±b)"))
}
