//! S-expression reader for PDDL text. Identifiers are lowercased; `;` starts
//! a comment running to the end of the line.

use super::PddlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    /// Head keyword of a list, if it starts with an atom.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

pub fn syntax_error(pos: Pos, message: impl Into<String>) -> PddlError {
    PddlError::Syntax {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

/// Parses exactly one top-level s-expression.
pub fn parse(text: &str) -> Result<SExpr, PddlError> {
    let mut stack: Vec<(Vec<SExpr>, Pos)> = Vec::new();
    let mut result: Option<SExpr> = None;
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                col += 1;
                if result.is_some() {
                    return Err(syntax_error(pos, "trailing input after top-level expression"));
                }
                stack.push((Vec::new(), pos));
            }
            ')' => {
                chars.next();
                col += 1;
                let (items, open) = stack
                    .pop()
                    .ok_or_else(|| syntax_error(pos, "unbalanced `)`"))?;
                let list = SExpr::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => result = Some(list),
                }
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    word.extend(c.to_lowercase());
                    chars.next();
                    col += 1;
                }
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(SExpr::Atom(word, pos)),
                    None => return Err(syntax_error(pos, format!("unexpected `{word}` outside a list"))),
                }
            }
        }
    }
    if let Some((_, open)) = stack.last() {
        return Err(syntax_error(*open, "unclosed `(`"));
    }
    result.ok_or_else(|| syntax_error(Pos { line, col }, "empty input"))
}
