use ca_core::State;

use crate::PreimageError;

/// Upper bound on the number of words a single enumeration may produce.
pub const ENUMERATION_CAP: u64 = 1 << 24;

/// All words of the given length in numeric (lexicographic) order.
pub fn words_of_length(state_count: u32, len: usize) -> Result<Vec<Vec<State>>, PreimageError> {
    let q = state_count as u64;
    let total = q
        .checked_pow(len as u32)
        .filter(|&n| n <= ENUMERATION_CAP)
        .ok_or(PreimageError::EnumerationTooLarge { state_count, len })?;
    let mut out = Vec::with_capacity(total as usize);
    let mut w = vec![0; len];
    for i in 0..total {
        if i > 0 {
            for slot in w.iter_mut().rev() {
                *slot += 1;
                if *slot < state_count {
                    break;
                }
                *slot = 0;
            }
        }
        out.push(w.clone());
    }
    Ok(out)
}

/// Digits for alphabets of at most ten states, dot-separated ids otherwise.
pub fn format_word(w: &[State], state_count: u32) -> String {
    if state_count <= 10 {
        w.iter().map(|s| char::from_digit(*s, 10).unwrap()).collect()
    } else {
        w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(".")
    }
}

pub fn parse_word(text: &str) -> Result<Vec<State>, PreimageError> {
    let text = text.trim();
    let bad = || PreimageError::BadWord(text.to_string());
    if text.contains('.') {
        text.split('.').map(|t| t.parse().map_err(|_| bad())).collect()
    } else {
        text.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order() {
        let ws = words_of_length(3, 2).unwrap();
        assert_eq!(ws.len(), 9);
        assert_eq!(ws[0], vec![0, 0]);
        assert_eq!(ws[1], vec![0, 1]);
        assert_eq!(ws[8], vec![2, 2]);
    }

    #[test]
    fn formats() {
        assert_eq!(format_word(&[1, 0, 1], 2), "101");
        assert_eq!(format_word(&[12, 0], 40), "12.0");
        assert_eq!(parse_word("12.0").unwrap(), vec![12, 0]);
        assert_eq!(parse_word("0110").unwrap(), vec![0, 1, 1, 0]);
        assert!(parse_word("0x").is_err());
    }

    #[test]
    fn enumeration_cap() {
        assert!(words_of_length(400, 4).is_err());
    }
}
