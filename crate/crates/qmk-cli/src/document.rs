//! Parser for chart documents: coordinate declarations, named fields and
//! named maps, with expressions in the shared grammar.
//!
//! ```text
//! coord x parity=even weight=0;
//! coord xi parity=odd weight=1;
//! field Q { x = xi; }
//! map flip { xi = -xi; }
//! ```
//!
//! `#` starts a line comment. Coordinate declarations may appear anywhere;
//! they are collected first, in order, and every field or map is parsed
//! against the complete chart. Unknown identifiers are errors. Map blocks
//! may omit coordinates, which then map to themselves.

use std::collections::BTreeMap;
use std::fmt;

use qmk_core::{
    Context, Coordinate, GradedContext, Parity, Polynomial, SubstitutionMap, VectorField,
};

#[derive(Debug)]
pub struct DocumentError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for DocumentError {}

#[derive(Debug)]
pub struct ChartDocument {
    pub context: Context,
    pub fields: BTreeMap<String, VectorField>,
    pub maps: BTreeMap<String, SubstitutionMap>,
}

impl ChartDocument {
    pub fn field(&self, name: &str) -> Result<&VectorField, String> {
        self.fields
            .get(name)
            .ok_or_else(|| format!("no field named `{name}` in the document"))
    }

    pub fn map(&self, name: &str) -> Result<&SubstitutionMap, String> {
        self.maps
            .get(name)
            .ok_or_else(|| format!("no map named `{name}` in the document"))
    }
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut column = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}

fn error_at(src: &str, offset: usize, message: impl Into<String>) -> DocumentError {
    let (line, column) = position(src, offset);
    DocumentError {
        message: message.into(),
        line,
        column,
    }
}

struct Scanner<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            return;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.pos >= self.bytes.len()
    }

    fn peek_word(&mut self) -> Option<&'a str> {
        self.skip_trivia();
        let start = self.pos;
        let mut end = start;
        while end < self.bytes.len()
            && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
        {
            end += 1;
        }
        if end > start {
            Some(&self.src[start..end])
        } else {
            None
        }
    }

    fn word(&mut self, what: &str) -> Result<(&'a str, usize), DocumentError> {
        self.skip_trivia();
        let start = self.pos;
        match self.peek_word() {
            Some(w) => {
                self.pos = start + w.len();
                Ok((w, start))
            }
            None => Err(error_at(self.src, start, format!("expected {what}"))),
        }
    }

    fn punct(&mut self, token: u8, what: &str) -> Result<(), DocumentError> {
        self.skip_trivia();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == token {
            self.pos += 1;
            Ok(())
        } else {
            Err(error_at(self.src, self.pos, format!("expected {what}")))
        }
    }

    fn try_punct(&mut self, token: u8) -> bool {
        self.skip_trivia();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == token {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, DocumentError> {
        self.skip_trivia();
        let start = self.pos;
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(error_at(self.src, start, "expected an integer"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| error_at(self.src, start, "integer out of range"))
    }

    /// The raw text of an expression up to the terminating `;`.
    fn expression(&mut self) -> Result<(&'a str, usize), DocumentError> {
        self.skip_trivia();
        let start = self.pos;
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b';' => {
                    let text = &self.src[start..self.pos];
                    self.pos += 1;
                    return Ok((text, start));
                }
                b'}' | b'{' => {
                    return Err(error_at(
                        self.src,
                        self.pos,
                        "expected `;` to end the expression",
                    ))
                }
                _ => self.pos += 1,
            }
        }
        Err(error_at(self.src, start, "unterminated expression"))
    }
}

enum RawItem {
    Field(String, usize, Vec<(String, usize, String, usize)>),
    Map(String, usize, Vec<(String, usize, String, usize)>),
}

pub fn parse_document(src: &str) -> Result<ChartDocument, DocumentError> {
    let mut scanner = Scanner::new(src);
    let mut coords: Vec<Coordinate> = Vec::new();
    let mut items: Vec<RawItem> = Vec::new();

    while !scanner.at_end() {
        let (keyword, at) = scanner.word("`coord`, `field` or `map`")?;
        match keyword {
            "coord" => {
                let (name, _) = scanner.word("a coordinate name")?;
                let (kw, kw_at) = scanner.word("`parity`")?;
                if kw != "parity" {
                    return Err(error_at(src, kw_at, "expected `parity`"));
                }
                scanner.punct(b'=', "`=`")?;
                let (value, value_at) = scanner.word("`even` or `odd`")?;
                let parity = match value {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(error_at(src, value_at, "expected `even` or `odd`")),
                };
                let (kw, kw_at) = scanner.word("`weight`")?;
                if kw != "weight" {
                    return Err(error_at(src, kw_at, "expected `weight`"));
                }
                scanner.punct(b'=', "`=`")?;
                let weight = scanner.integer()?;
                scanner.punct(b';', "`;`")?;
                coords.push(Coordinate::new(name, parity, weight));
            }
            "field" | "map" => {
                let (name, name_at) = scanner.word("a name")?;
                scanner.punct(b'{', "`{`")?;
                let mut assignments = Vec::new();
                while !scanner.try_punct(b'}') {
                    let (coord, coord_at) = scanner.word("a coordinate name")?;
                    scanner.punct(b'=', "`=`")?;
                    let (expr, expr_at) = scanner.expression()?;
                    assignments.push((coord.to_string(), coord_at, expr.to_string(), expr_at));
                }
                let item = if keyword == "field" {
                    RawItem::Field(name.to_string(), name_at, assignments)
                } else {
                    RawItem::Map(name.to_string(), name_at, assignments)
                };
                items.push(item);
            }
            _ => {
                return Err(error_at(
                    src,
                    at,
                    format!("unknown declaration `{keyword}`"),
                ))
            }
        }
    }

    let context = GradedContext::new(coords)
        .map_err(|e| error_at(src, 0, e.to_string()))?;

    let mut fields = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for item in items {
        match item {
            RawItem::Field(name, name_at, assignments) => {
                if fields.contains_key(&name) {
                    return Err(error_at(src, name_at, format!("duplicate field `{name}`")));
                }
                let mut components = Vec::new();
                let mut seen = BTreeMap::new();
                for (coord, coord_at, expr, expr_at) in assignments {
                    let id = context
                        .require(&coord)
                        .map_err(|e| error_at(src, coord_at, e.to_string()))?;
                    if seen.insert(id, ()).is_some() {
                        return Err(error_at(
                            src,
                            coord_at,
                            format!("duplicate component for `{coord}`"),
                        ));
                    }
                    let poly = parse_expr_at(src, &context, &expr, expr_at)?;
                    components.push((id, poly));
                }
                let field = VectorField::new(&context, components)
                    .map_err(|e| error_at(src, name_at, e.to_string()))?;
                fields.insert(name, field);
            }
            RawItem::Map(name, name_at, assignments) => {
                if maps.contains_key(&name) {
                    return Err(error_at(src, name_at, format!("duplicate map `{name}`")));
                }
                let mut images: BTreeMap<_, Polynomial> = context
                    .coordinates()
                    .map(|(id, _)| (id, Polynomial::coordinate(&context, id)))
                    .collect();
                let mut seen = BTreeMap::new();
                for (coord, coord_at, expr, expr_at) in assignments {
                    let id = context
                        .require(&coord)
                        .map_err(|e| error_at(src, coord_at, e.to_string()))?;
                    if seen.insert(id, ()).is_some() {
                        return Err(error_at(
                            src,
                            coord_at,
                            format!("duplicate image for `{coord}`"),
                        ));
                    }
                    let poly = parse_expr_at(src, &context, &expr, expr_at)?;
                    images.insert(id, poly);
                }
                let map =
                    SubstitutionMap::new(&context, &context, images.into_iter().collect())
                        .map_err(|e| error_at(src, name_at, e.to_string()))?;
                maps.insert(name, map);
            }
        }
    }

    Ok(ChartDocument {
        context,
        fields,
        maps,
    })
}

fn parse_expr_at(
    src: &str,
    ctx: &Context,
    expr: &str,
    expr_at: usize,
) -> Result<Polynomial, DocumentError> {
    qmk_core::parse_expression(expr, ctx)
        .map_err(|e| error_at(src, expr_at + e.offset, e.message))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_smallest_chart() {
        let doc = parse_document(
            "coord x parity=even weight=0; coord xi parity=odd weight=1; field Q { x = xi; }",
        )
        .unwrap();
        assert_eq!(doc.context.len(), 2);
        let q = doc.field("Q").unwrap();
        assert!(q.is_homological().unwrap().is_homological());
    }

    #[test]
    fn rejects_zero_denominator_with_position() {
        let err = parse_document(
            "coord xi parity=odd weight=1;\nfield Q { xi = 1/0; }",
        )
        .unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("zero denominator"), "{err}");
    }

    #[test]
    fn rejects_unknown_identifier_with_position() {
        let err = parse_document("coord x parity=even weight=0; field Q { x = nope; }")
            .unwrap_err();
        assert!(err.message.contains("unknown identifier"));
        assert_eq!(err.line, 1);
    }

    #[test]
    fn rejects_duplicate_coordinates() {
        let err = parse_document(
            "coord x parity=even weight=0; coord x parity=odd weight=1;",
        )
        .unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn maps_default_to_identity() {
        let doc = parse_document(
            "coord x parity=even weight=0; coord xi parity=odd weight=1; map m { xi = 2*xi; }",
        )
        .unwrap();
        let m = doc.map("m").unwrap();
        let x = doc.context.require("x").unwrap();
        assert_eq!(
            m.image(x).unwrap(),
            &Polynomial::coordinate(&doc.context, x)
        );
    }

    #[test]
    fn comments_are_ignored()  {
        let doc = parse_document(
            "# a chart\ncoord x parity=even weight=0; # trailing\nfield Q { }",
        )
        .unwrap();
        assert!(doc.field("Q").unwrap().is_zero());
    }
}
