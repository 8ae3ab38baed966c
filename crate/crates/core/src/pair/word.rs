//! Raw words: whitespace-separated tokens `name`, `name^k`, `1`, or a matrix
//! literal such as `[[1,0,1],[0,1,0],[0,0,1]]^-1`.

use crate::error::{PairError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    Named(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub letter: Letter,
    pub exp: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawWord(pub Vec<Token>);

fn parse_matrix_literal(text: &str) -> Result<Vec<Vec<String>>> {
    let bad = || PairError::Parse(format!("malformed matrix literal `{text}`"));
    let inner = text.strip_prefix("[[").and_then(|t| t.strip_suffix("]]")).ok_or_else(bad)?;
    let rows: Vec<Vec<String>> = inner
        .split("],[")
        .map(|row| row.split(',').map(|e| e.trim().to_string()).collect())
        .collect();
    if rows.iter().any(|r| r.len() != rows.len() || r.iter().any(String::is_empty)) {
        return Err(bad());
    }
    Ok(rows)
}

fn parse_token(tok: &str) -> Result<Option<Token>> {
    let (body, exp) = match tok.rfind('^') {
        Some(i) if !tok[i..].contains(']') => {
            let exp: i64 = tok[i + 1..]
                .parse()
                .map_err(|_| PairError::Parse(format!("bad exponent in `{tok}`")))?;
            (&tok[..i], exp)
        }
        _ => (tok, 1),
    };
    if body.is_empty() {
        return Err(PairError::Parse(format!("empty generator in `{tok}`")));
    }
    if body == "1" || exp == 0 {
        return Ok(None);
    }
    let letter = if body.starts_with('[') {
        Letter::Matrix(parse_matrix_literal(body)?)
    } else {
        Letter::Named(body.to_string())
    };
    Ok(Some(Token { letter, exp }))
}

impl std::str::FromStr for RawWord {
    type Err = PairError;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for tok in s.split_whitespace() {
            if let Some(t) = parse_token(tok)? {
                tokens.push(t);
            }
        }
        Ok(RawWord(tokens))
    }
}

impl RawWord {
    pub fn named(name: &str, exp: i64) -> Self {
        RawWord(vec![Token { letter: Letter::Named(name.to_string()), exp }])
    }

    pub fn concat(mut self, other: RawWord) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn inverse(&self) -> Self {
        RawWord(self.0.iter().rev().map(|t| Token { letter: t.letter.clone(), exp: -t.exp }).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let w: RawWord = "a b^-1 1 c^3 d^0".parse().unwrap();
        assert_eq!(w.0.len(), 3);
        assert_eq!(w.0[1], Token { letter: Letter::Named("b".into()), exp: -1 });
        let w: RawWord = "[[1,0,1/2],[0,1,0],[0,0,1]]^-1".parse().unwrap();
        match &w.0[0].letter {
            Letter::Matrix(rows) => assert_eq!(rows[0][2], "1/2"),
            _ => panic!(),
        }
        assert_eq!(w.0[0].exp, -1);
        assert!("a^x".parse::<RawWord>().is_err());
        assert!("[[1,2],[3]]".parse::<RawWord>().is_err());
        assert!("".parse::<RawWord>().unwrap().0.is_empty());
    }
}
