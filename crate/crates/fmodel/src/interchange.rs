//! Canonical text interchange format: a Turtle subset with a hand-written
//! parser and a bit-exact canonical writer.
//!
//! The grammar covers `@prefix` declarations, statements with `;`/`,`
//! continuation, `a` as the kind predicate, the fixed object-property
//! vocabulary, plain string literals (`f:label`, `f:relation`), typed region
//! literals (`f:value "..."^^f:timeInterval|f:geoBox|f:trajectory`), and `#`
//! comments. No blank nodes, collections, or relative IRIs.
//!
//! The writer emits one canonical form per store content: prefixes sorted by
//! prefix, subjects sorted by expanded IRI, `a` first, properties in the
//! fixed table order, objects sorted, LF line endings, one trailing newline.
//! `serialize` after `parse` is a fixed point.

use thiserror::Error;

use crate::graph::{GraphError, Kind, Property, RegionValue, Snapshot, Store};
use crate::spacetime::{AllenRelation, GeoBox, SpacetimeError, TimeInterval, Trajectory};
use crate::vocab;

/// A syntax error, pointing at the first offending character (1-based).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at line {line}, column {column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoadErrorKind {
    #[error(transparent)]
    Graph(GraphError),
    #[error(transparent)]
    Lexical(SpacetimeError),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error("predicate `{predicate}` expects an entity object, found a literal")]
    ExpectedEntity { predicate: String },
    #[error("predicate `{predicate}` expects a literal object")]
    ExpectedLiteral { predicate: String },
    #[error("unexpected datatype `{0}`")]
    UnexpectedDatatype(String),
    #[error("conflicting re-attachment on `{0}`")]
    ConflictingAttachment(String),
}

/// A statement that is grammatical but cannot be loaded into a store.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("load error at line {line}, column {column}: {kind}")]
pub struct LoadError {
    pub line: usize,
    pub column: usize,
    pub kind: LoadErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterchangeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Load(#[from] LoadError),
}

impl InterchangeError {
    /// Position of the error (line, column), 1-based.
    pub fn position(&self) -> (usize, usize) {
        match self {
            InterchangeError::Parse(e) => (e.line, e.column),
            InterchangeError::Load(e) => (e.line, e.column),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    PrefixKeyword,
    IriRef(String),
    /// `prefix:local`; the local part may be empty (namespace form).
    PName { prefix: String, local: String },
    A,
    StringLit(String),
    CaretCaret,
    Dot,
    Semicolon,
    Comma,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::PrefixKeyword => "`@prefix`".into(),
            TokenKind::IriRef(i) => format!("`<{i}>`"),
            TokenKind::PName { prefix, local } => format!("`{prefix}:{local}`"),
            TokenKind::A => "`a`".into(),
            TokenKind::StringLit(_) => "string literal".into(),
            TokenKind::CaretCaret => "`^^`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Semicolon => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token {
    kind: TokenKind,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, expected: &str, found: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            expected: expected.to_string(),
            found: found.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn is_name_char(c: char) -> bool {
        c.is_ascii_alphanumeric() || c == '-' || c == '_'
    }

    fn read_name(&mut self) -> String {
        let mut out = String::new();
        while let Some(&c) = self.chars.peek() {
            if Self::is_name_char(c) {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let line = self.line;
        let column = self.column;
        let at = |kind| Token { kind, line, column };

        let Some(&c) = self.chars.peek() else {
            return Ok(at(TokenKind::Eof));
        };
        match c {
            '.' => {
                self.bump();
                Ok(at(TokenKind::Dot))
            }
            ';' => {
                self.bump();
                Ok(at(TokenKind::Semicolon))
            }
            ',' => {
                self.bump();
                Ok(at(TokenKind::Comma))
            }
            '@' => {
                self.bump();
                let word = self.read_name();
                if word == "prefix" {
                    Ok(at(TokenKind::PrefixKeyword))
                } else {
                    // Point at the first byte where the word stops matching
                    // the only valid keyword.
                    let matching = word
                        .chars()
                        .zip("prefix".chars())
                        .take_while(|(a, b)| a == b)
                        .count();
                    Err(ParseError {
                        line,
                        column: column + 1 + matching,
                        expected: "`@prefix`".into(),
                        found: format!("`@{word}`"),
                    })
                }
            }
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.chars.peek() {
                        Some('>') => {
                            self.bump();
                            return Ok(at(TokenKind::IriRef(iri)));
                        }
                        Some(&c) if !c.is_whitespace() && c != '<' => {
                            iri.push(c);
                            self.bump();
                        }
                        Some(&c) => return Err(self.error("`>`", format!("`{c}`"))),
                        None => return Err(self.error("`>`", "end of input")),
                    }
                }
            }
            '"' => {
                self.bump();
                let mut value = String::new();
                loop {
                    match self.chars.peek() {
                        Some('"') => {
                            self.bump();
                            return Ok(at(TokenKind::StringLit(value)));
                        }
                        Some('\\') => {
                            self.bump();
                            let (escape_line, escape_column) = (self.line, self.column);
                            match self.bump() {
                                Some('"') => value.push('"'),
                                Some('\\') => value.push('\\'),
                                Some('n') => value.push('\n'),
                                Some('r') => value.push('\r'),
                                Some('t') => value.push('\t'),
                                Some(c) => {
                                    return Err(ParseError {
                                        line: escape_line,
                                        column: escape_column,
                                        expected: "escape sequence".into(),
                                        found: format!("`\\{c}`"),
                                    })
                                }
                                None => return Err(self.error("escape sequence", "end of input")),
                            }
                        }
                        Some('\n') | None => {
                            return Err(self.error("closing `\"`", "end of line"))
                        }
                        Some(&c) => {
                            value.push(c);
                            self.bump();
                        }
                    }
                }
            }
            '^' => {
                self.bump();
                match self.chars.peek() {
                    Some('^') => {
                        self.bump();
                        Ok(at(TokenKind::CaretCaret))
                    }
                    // The second caret is the missing byte; point there.
                    _ => Err(self.error("`^^`", "`^`")),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let word = self.read_name();
                if self.chars.peek() == Some(&':') {
                    self.bump();
                    let local = self.read_name();
                    Ok(at(TokenKind::PName {
                        prefix: word,
                        local,
                    }))
                } else if word == "a" {
                    Ok(at(TokenKind::A))
                } else {
                    // Every byte of the word is a valid name byte; the first
                    // offending byte is wherever the `:` failed to appear.
                    Err(self.error("`:` to continue a prefixed name", format!("`{word}`")))
                }
            }
            c => Err(self.error("a statement", format!("`{c}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser (grammar only; loading happens afterwards)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
struct Located<T> {
    value: T,
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Predicate {
    KindOf,
    Named(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Object {
    Name(String),
    Literal {
        value: String,
        datatype: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Statement {
    Prefix {
        prefix: Located<String>,
        namespace: Located<String>,
    },
    Triple {
        subject: Located<String>,
        predicate: Located<Predicate>,
        object: Located<Object>,
    },
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(text);
        let current = lexer.next_token()?;
        Ok(Parser { lexer, current })
    }

    fn advance(&mut self) -> Result<Token, ParseError> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.current, next))
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError {
            line: self.current.line,
            column: self.current.column,
            expected: expected.to_string(),
            found: self.current.kind.describe(),
        }
    }

    fn expect_dot(&mut self) -> Result<(), ParseError> {
        if self.current.kind == TokenKind::Dot {
            self.advance()?;
            Ok(())
        } else {
            Err(self.unexpected("`.`"))
        }
    }

    fn pname(&mut self, expected: &str) -> Result<Located<String>, ParseError> {
        match &self.current.kind {
            TokenKind::PName { prefix, local } if !local.is_empty() => {
                let value = format!("{prefix}:{local}");
                let tok = self.advance()?;
                Ok(Located {
                    value,
                    line: tok.line,
                    column: tok.column,
                })
            }
            // `p:` with nothing after the colon: the missing local name is
            // the offending position, right past the colon.
            TokenKind::PName { prefix, .. } => Err(ParseError {
                line: self.current.line,
                column: self.current.column + prefix.chars().count() + 1,
                expected: format!("local name to complete {expected}"),
                found: format!("`{prefix}:`"),
            }),
            _ => Err(self.unexpected(expected)),
        }
    }

    fn document(&mut self) -> Result<Vec<Statement>, ParseError> {
        let mut statements = Vec::new();
        loop {
            match &self.current.kind {
                TokenKind::Eof => return Ok(statements),
                TokenKind::PrefixKeyword => {
                    self.advance()?;
                    let prefix = match &self.current.kind {
                        TokenKind::PName { prefix, local } if local.is_empty() => {
                            let value = prefix.clone();
                            let tok = self.advance()?;
                            Located {
                                value,
                                line: tok.line,
                                column: tok.column,
                            }
                        }
                        // A declared prefix carries no local name; the first
                        // local byte is the offending one.
                        TokenKind::PName { prefix, local } => {
                            return Err(ParseError {
                                line: self.current.line,
                                column: self.current.column + prefix.chars().count() + 1,
                                expected: "whitespace after the namespace prefix".into(),
                                found: format!("`{prefix}:{local}`"),
                            })
                        }
                        _ => return Err(self.unexpected("namespace prefix (`p:`)")),
                    };
                    let namespace = match &self.current.kind {
                        TokenKind::IriRef(iri) => {
                            let value = iri.clone();
                            let tok = self.advance()?;
                            Located {
                                value,
                                line: tok.line,
                                column: tok.column,
                            }
                        }
                        _ => return Err(self.unexpected("`<namespace>`")),
                    };
                    self.expect_dot()?;
                    statements.push(Statement::Prefix { prefix, namespace });
                }
                TokenKind::PName { .. } => {
                    let subject = self.pname("subject")?;
                    self.predicate_object_list(&subject, &mut statements)?;
                    self.expect_dot()?;
                }
                _ => return Err(self.unexpected("`@prefix` or a subject")),
            }
        }
    }

    fn predicate_object_list(
        &mut self,
        subject: &Located<String>,
        out: &mut Vec<Statement>,
    ) -> Result<(), ParseError> {
        loop {
            let predicate = match &self.current.kind {
                TokenKind::A => {
                    let tok = self.advance()?;
                    Located {
                        value: Predicate::KindOf,
                        line: tok.line,
                        column: tok.column,
                    }
                }
                TokenKind::PName { .. } => {
                    let name = self.pname("predicate")?;
                    Located {
                        value: Predicate::Named(name.value),
                        line: name.line,
                        column: name.column,
                    }
                }
                _ => return Err(self.unexpected("predicate (`a` or prefixed name)")),
            };

            loop {
                let object = self.object()?;
                out.push(Statement::Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if self.current.kind == TokenKind::Comma {
                    self.advance()?;
                    continue;
                }
                break;
            }

            if self.current.kind == TokenKind::Semicolon {
                self.advance()?;
                // A trailing `;` before `.` is tolerated on input.
                if self.current.kind == TokenKind::Dot {
                    return Ok(());
                }
                continue;
            }
            return Ok(());
        }
    }

    fn object(&mut self) -> Result<Located<Object>, ParseError> {
        match &self.current.kind {
            TokenKind::PName { .. } => {
                let name = self.pname("object")?;
                Ok(Located {
                    value: Object::Name(name.value),
                    line: name.line,
                    column: name.column,
                })
            }
            TokenKind::StringLit(value) => {
                let value = value.clone();
                let tok = self.advance()?;
                let datatype = if self.current.kind == TokenKind::CaretCaret {
                    self.advance()?;
                    Some(self.pname("datatype")?.value)
                } else {
                    None
                };
                Ok(Located {
                    value: Object::Literal { value, datatype },
                    line: tok.line,
                    column: tok.column,
                })
            }
            _ => Err(self.unexpected("object (prefixed name or literal)")),
        }
    }
}

// ---------------------------------------------------------------------------
// Loader
// ---------------------------------------------------------------------------

fn load_err(line: usize, column: usize, kind: LoadErrorKind) -> InterchangeError {
    InterchangeError::Load(LoadError { line, column, kind })
}

fn graph_err<T>(at: &Located<T>, e: GraphError) -> InterchangeError {
    load_err(at.line, at.column, LoadErrorKind::Graph(e))
}

/// Names of the literal-valued predicates under the vocabulary namespace.
fn literal_predicate(iri: &str) -> Option<&'static str> {
    match iri.strip_prefix(vocab::F_NS) {
        Some("label") => Some(vocab::LABEL),
        Some("relation") => Some(vocab::RELATION),
        Some("value") => Some(vocab::VALUE),
        _ => None,
    }
}

/// Parse a document into a fresh store.
pub fn parse(text: &str) -> Result<Store, InterchangeError> {
    let mut store = Store::new();
    parse_into(&mut store, text)?;
    Ok(store)
}

/// Parse a document into an existing store, merging prefixes, entities, and
/// assertions. Entity redeclarations with the same kind are no-ops; kind
/// conflicts, prefix rebindings, and conflicting literal attachments are load
/// errors. On error the store may already contain part of the document.
pub fn parse_into(store: &mut Store, text: &str) -> Result<(), InterchangeError> {
    let statements = Parser::new(text)?.document()?;

    // Names resolve against the prefixes declared up to their statement, so
    // expansion happens in document order, before the two load passes.
    let mut kind_triples = Vec::new();
    let mut other_triples = Vec::new();
    for statement in &statements {
        match statement {
            Statement::Prefix { prefix, namespace } => {
                store
                    .declare_prefix(&prefix.value, &namespace.value)
                    .map_err(|e| graph_err(prefix, e))?;
            }
            Statement::Triple {
                subject,
                predicate,
                object,
            } => {
                let subject_iri = store
                    .expand(&subject.value)
                    .map_err(|e| graph_err(subject, e))?;
                let predicate_iri = match &predicate.value {
                    Predicate::KindOf => None,
                    Predicate::Named(name) => {
                        Some(store.expand(name).map_err(|e| graph_err(predicate, e))?)
                    }
                };
                let object_iri = match &object.value {
                    Object::Name(name) => {
                        Some(store.expand(name).map_err(|e| graph_err(object, e))?)
                    }
                    Object::Literal { .. } => None,
                };
                let triple = (
                    Located {
                        value: (subject.value.clone(), subject_iri),
                        line: subject.line,
                        column: subject.column,
                    },
                    Located {
                        value: predicate_iri,
                        line: predicate.line,
                        column: predicate.column,
                    },
                    Located {
                        value: (object.value.clone(), object_iri),
                        line: object.line,
                        column: object.column,
                    },
                );
                if matches!(predicate.value, Predicate::KindOf) {
                    kind_triples.push(triple);
                } else {
                    other_triples.push(triple);
                }
            }
        }
    }

    // Pass 1: kinds. Declaring entities first lets statements reference
    // subjects that appear later in the document, which sorted canonical
    // files do all the time.
    for (subject, _, object) in &kind_triples {
        let Some(kind_iri) = &object.value.1 else {
            return Err(load_err(
                object.line,
                object.column,
                LoadErrorKind::ExpectedEntity {
                    predicate: "a".into(),
                },
            ));
        };
        let kind = kind_iri
            .strip_prefix(vocab::F_NS)
            .and_then(Kind::from_name)
            .ok_or_else(|| {
                load_err(
                    object.line,
                    object.column,
                    LoadErrorKind::UnknownKind(render_object_name(&object.value.0)),
                )
            })?;
        store
            .ensure_entity(&subject.value.0, kind)
            .map_err(|e| graph_err(subject, e))?;
    }

    // Pass 2: edges and literal attachments.
    for (subject, predicate, object) in &other_triples {
        let predicate_iri = predicate.value.as_deref().expect("named predicate");
        let subject_ref = store
            .resolve(&subject.value.0)
            .map_err(|e| graph_err(subject, e))?;

        if let Some(attachment) = literal_predicate(predicate_iri) {
            let Object::Literal { value, datatype } = &object.value.0 else {
                return Err(load_err(
                    object.line,
                    object.column,
                    LoadErrorKind::ExpectedLiteral {
                        predicate: format!("f:{attachment}"),
                    },
                ));
            };
            load_attachment(store, attachment, &subject_ref, value, datatype, object)?;
            continue;
        }

        let property = predicate_iri
            .strip_prefix(vocab::F_NS)
            .and_then(Property::from_name)
            .ok_or_else(|| {
                load_err(
                    predicate.line,
                    predicate.column,
                    LoadErrorKind::UnknownProperty(render_predicate(predicate)),
                )
            })?;
        let Object::Name(object_name) = &object.value.0 else {
            return Err(load_err(
                object.line,
                object.column,
                LoadErrorKind::ExpectedEntity {
                    predicate: property.name().to_string(),
                },
            ));
        };
        let object_ref = store
            .resolve(object_name)
            .map_err(|e| graph_err(object, e))?;
        store
            .assert_edge(&subject_ref, property, &object_ref)
            .map_err(|e| graph_err(predicate, e))?;
    }

    Ok(())
}

fn render_object_name(obj: &Object) -> String {
    match obj {
        Object::Name(n) => n.clone(),
        Object::Literal { value, .. } => format!("\"{value}\""),
    }
}

fn render_predicate(p: &Located<Option<String>>) -> String {
    p.value.clone().unwrap_or_else(|| "a".into())
}

fn load_attachment(
    store: &mut Store,
    attachment: &str,
    subject: &crate::graph::EntityRef,
    value: &str,
    datatype: &Option<String>,
    at: &Located<(Object, Option<String>)>,
) -> Result<(), InterchangeError> {
    let conflict = || {
        load_err(
            at.line,
            at.column,
            LoadErrorKind::ConflictingAttachment(subject.iri().to_string()),
        )
    };
    match attachment {
        vocab::LABEL | vocab::RELATION => {
            if let Some(dt) = datatype {
                return Err(load_err(
                    at.line,
                    at.column,
                    LoadErrorKind::UnexpectedDatatype(dt.clone()),
                ));
            }
            if attachment == vocab::LABEL {
                if let Some(existing) = store.label(subject) {
                    if existing != value {
                        return Err(conflict());
                    }
                }
                store.set_label(subject, value).map_err(|e| graph_err(at, e))?;
            } else {
                let relation = AllenRelation::from_name(value).map_err(|e| {
                    load_err(at.line, at.column, LoadErrorKind::Lexical(e))
                })?;
                if let Some(existing) = store.relation_tag(subject) {
                    if existing != relation {
                        return Err(conflict());
                    }
                }
                store
                    .set_relation_tag(subject, relation)
                    .map_err(|e| graph_err(at, e))?;
            }
            Ok(())
        }
        vocab::VALUE => {
            let Some(datatype) = datatype else {
                return Err(load_err(
                    at.line,
                    at.column,
                    LoadErrorKind::UnexpectedDatatype("(none)".into()),
                ));
            };
            let datatype_iri = store.expand(datatype).map_err(|e| graph_err(at, e))?;
            let region_value = match datatype_iri.strip_prefix(vocab::F_NS) {
                Some(dt) if dt == vocab::DT_TIME_INTERVAL => TimeInterval::parse(value)
                    .map(RegionValue::Time)
                    .map_err(|e| load_err(at.line, at.column, LoadErrorKind::Lexical(e)))?,
                Some(dt) if dt == vocab::DT_GEO_BOX => GeoBox::parse(value)
                    .map(RegionValue::Space)
                    .map_err(|e| load_err(at.line, at.column, LoadErrorKind::Lexical(e)))?,
                Some(dt) if dt == vocab::DT_TRAJECTORY => Trajectory::parse(value)
                    .map(RegionValue::SpatioTemporal)
                    .map_err(|e| load_err(at.line, at.column, LoadErrorKind::Lexical(e)))?,
                _ => {
                    return Err(load_err(
                        at.line,
                        at.column,
                        LoadErrorKind::UnexpectedDatatype(datatype.clone()),
                    ))
                }
            };
            if let Some(existing) = store.region_value(subject) {
                if *existing != region_value {
                    return Err(conflict());
                }
            }
            store
                .set_region_value(subject, region_value)
                .map_err(|e| graph_err(at, e))?;
            Ok(())
        }
        _ => unreachable!("literal_predicate returns known attachments"),
    }
}

// ---------------------------------------------------------------------------
// Canonical writer
// ---------------------------------------------------------------------------

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

fn region_lexical(value: &RegionValue) -> (String, &'static str) {
    match value {
        RegionValue::Time(iv) => (iv.lexical(), vocab::DT_TIME_INTERVAL),
        RegionValue::Space(b) => (b.lexical(), vocab::DT_GEO_BOX),
        RegionValue::SpatioTemporal(t) => (t.lexical(), vocab::DT_TRAJECTORY),
    }
}

/// Serialize a snapshot into the canonical form. Pure function of store
/// content: independent of construction history, bit-exact across platforms.
pub fn serialize(snapshot: &Snapshot) -> String {
    let mut out = String::new();
    for (prefix, namespace) in snapshot.prefixes() {
        out.push_str(&format!("@prefix {prefix}: <{namespace}> .\n"));
    }

    let mut blocks = Vec::new();
    for (entity, kind) in snapshot.entities() {
        let mut lines = vec![format!("a f:{}", kind.name())];
        for property in Property::ALL {
            let objects = snapshot.objects_of(&entity, property);
            if objects.is_empty() {
                continue;
            }
            let rendered: Vec<String> =
                objects.iter().map(|o| snapshot.compact(o)).collect();
            lines.push(format!("f:{} {}", property.name(), rendered.join(" , ")));
        }
        if let Some(label) = snapshot.label(&entity) {
            lines.push(format!("f:{} \"{}\"", vocab::LABEL, escape(label)));
        }
        if let Some(relation) = snapshot.relation_tag(&entity) {
            lines.push(format!("f:{} \"{}\"", vocab::RELATION, relation.name()));
        }
        if let Some(value) = snapshot.region_value(&entity) {
            let (lexical, datatype) = region_lexical(value);
            lines.push(format!(
                "f:{} \"{}\"^^f:{datatype}",
                vocab::VALUE,
                escape(&lexical)
            ));
        }

        let mut block = String::new();
        block.push_str(&snapshot.compact(&entity));
        block.push(' ');
        block.push_str(&lines.join(" ;\n    "));
        block.push_str(" .\n");
        blocks.push(block);
    }

    if !blocks.is_empty() {
        out.push('\n');
        out.push_str(&blocks.join("\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ConceptKind, Kind};
    use crate::patterns::{
        build_causality, build_participation, CausalitySpec, ParticipantSpec, ParticipationSpec,
    };

    const HEADER: &str = "@prefix ex: <http://example.org/emergency#> .\n\
                          @prefix f: <https://w3id.org/event-model-f#> .\n";

    fn doc(body: &str) -> String {
        format!("{HEADER}{body}")
    }

    #[test]
    fn empty_document_is_an_empty_store() {
        let store = parse("").unwrap();
        assert_eq!(store.entity_count(), 0);
        assert_eq!(store.edge_count(), 0);
    }

    #[test]
    fn parses_kinds_edges_and_literals() {
        let text = doc(
            "ex:pole a f:Event .\n\
             ex:outage a f:Event .\n\
             ex:cause a f:EventType ;\n    f:classifies ex:pole .\n\
             ex:just a f:Description ;\n    f:label \"laws of physics\" .\n\
             ex:region a f:TimeInterval ;\n    f:value \"2009-06-08T00:00:00Z/2009-06-14T00:00:00Z\"^^f:timeInterval .\n",
        );
        let store = parse(&text).unwrap();
        let snap = store.snapshot();
        let cause = snap.resolve("ex:cause").unwrap();
        let pole = snap.resolve("ex:pole").unwrap();
        assert!(snap.has_edge(&cause, Property::Classifies, &pole));
        let just = snap.resolve("ex:just").unwrap();
        assert_eq!(snap.label(&just), Some("laws of physics"));
        let region = snap.resolve("ex:region").unwrap();
        assert!(matches!(
            snap.region_value(&region),
            Some(RegionValue::Time(_))
        ));
    }

    #[test]
    fn kind_conflict_is_a_load_error() {
        let text = doc("ex:x a f:Event .\nex:x a f:Object .\n");
        let err = parse(&text).unwrap_err();
        let InterchangeError::Load(load) = err else {
            panic!("expected load error")
        };
        assert!(matches!(
            load.kind,
            LoadErrorKind::Graph(GraphError::KindConflict { .. })
        ));
        assert_eq!(load.line, 4);
        // Re-declaring the same kind is a merge no-op.
        let text = doc("ex:x a f:Event .\nex:x a f:Event .\n");
        assert!(parse(&text).is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        // `ex` without its colon is not a token; the error points at the byte
        // where the `:` should have been.
        let err = parse("@prefix ex <http://x#> .").unwrap_err();
        let InterchangeError::Parse(e) = err else {
            panic!("expected parse error")
        };
        assert_eq!((e.line, e.column), (1, 11));

        let err = parse(&doc("ex:x a f:Event ,, .\n")).unwrap_err();
        assert!(matches!(err, InterchangeError::Parse(_)));

        let err = parse(&doc("ex:x a f:Event\n")).unwrap_err();
        let InterchangeError::Parse(e) = err else {
            panic!("expected parse error")
        };
        assert_eq!(e.expected, "`.`");
    }

    #[test]
    fn load_errors_carry_positions() {
        // Unknown property.
        let err = parse(&doc("ex:x a f:Event .\nex:x f:bogus ex:x .\n")).unwrap_err();
        let (line, col) = err.position();
        assert_eq!((line, col), (4, 6));

        // Range violation via the type table.
        let text = doc(
            "ex:cause a f:EventType .\nex:house a f:Object .\nex:cause f:classifies ex:house .\n",
        );
        let err = parse(&text).unwrap_err();
        let InterchangeError::Load(load) = err else {
            panic!("expected load error")
        };
        assert!(matches!(
            load.kind,
            LoadErrorKind::Graph(GraphError::RangeViolation { .. })
        ));

        // Bad typed literal.
        let text = doc("ex:r a f:TimeInterval ;\n    f:value \"oops\"^^f:timeInterval .\n");
        let err = parse(&text).unwrap_err();
        assert!(matches!(
            err,
            InterchangeError::Load(LoadError {
                kind: LoadErrorKind::Lexical(_),
                ..
            })
        ));
    }

    #[test]
    fn forward_references_within_a_document_load() {
        // Canonical files sort subjects, so edges routinely point at entities
        // declared further down.
        let text = doc("ex:a a f:EventType ;\n    f:classifies ex:z .\nex:z a f:Event .\n");
        assert!(parse(&text).is_ok());
    }

    fn example_store() -> Store {
        let mut s = Store::new();
        s.declare_prefix("ex", "http://example.org/emergency#").unwrap();
        s.declare_prefix("dom", "http://example.org/domain#").unwrap();
        let outage = s.new_entity("ex:power-outage-1", Kind::Event).unwrap();
        let pole = s.new_entity("ex:snapped-power-pole-1", Kind::Event).unwrap();
        let person = s.new_entity("ex:person-1", Kind::Object).unwrap();
        let house = s.new_entity("ex:house-1", Kind::Object).unwrap();
        build_causality(
            &mut s,
            &CausalitySpec {
                cause: pole,
                effect: outage.clone(),
                justification: "laws of physics".into(),
            },
        )
        .unwrap();
        build_participation(
            &mut s,
            &ParticipationSpec {
                described_event: outage,
                participants: vec![
                    ParticipantSpec {
                        object: person,
                        role_iri: "ex:citizen-1".into(),
                        specializes: Some("dom:Citizen".into()),
                    },
                    ParticipantSpec {
                        object: house,
                        role_iri: "ex:affected-bldg-1".into(),
                        specializes: Some("dom:AffectedBuilding".into()),
                    },
                ],
                time_param: None,
                location_params: vec![],
            },
        )
        .unwrap();
        s
    }

    #[test]
    fn serialize_parse_round_trip_is_semantic_identity() {
        let store = example_store();
        let text = serialize(&store.snapshot());
        let reparsed = parse(&text).unwrap();
        assert_eq!(reparsed.snapshot(), store.snapshot());
        // Canonical form is a fixed point.
        assert_eq!(serialize(&reparsed.snapshot()), text);
    }

    #[test]
    fn canonical_form_ignores_construction_order() {
        let a = example_store();

        // Same content, different insertion order.
        let mut b = Store::new();
        b.declare_prefix("dom", "http://example.org/domain#").unwrap();
        b.declare_prefix("ex", "http://example.org/emergency#").unwrap();
        let house = b.new_entity("ex:house-1", Kind::Object).unwrap();
        let person = b.new_entity("ex:person-1", Kind::Object).unwrap();
        let pole = b.new_entity("ex:snapped-power-pole-1", Kind::Event).unwrap();
        let outage = b.new_entity("ex:power-outage-1", Kind::Event).unwrap();
        build_causality(
            &mut b,
            &CausalitySpec {
                cause: pole,
                effect: outage.clone(),
                justification: "laws of physics".into(),
            },
        )
        .unwrap();
        build_participation(
            &mut b,
            &ParticipationSpec {
                described_event: outage,
                participants: vec![
                    ParticipantSpec {
                        object: person,
                        role_iri: "ex:citizen-1".into(),
                        specializes: Some("dom:Citizen".into()),
                    },
                    ParticipantSpec {
                        object: house,
                        role_iri: "ex:affected-bldg-1".into(),
                        specializes: Some("dom:AffectedBuilding".into()),
                    },
                ],
                time_param: None,
                location_params: vec![],
            },
        )
        .unwrap();

        assert_eq!(serialize(&a.snapshot()), serialize(&b.snapshot()));
    }

    #[test]
    fn string_escapes_round_trip() {
        let mut s = Store::new();
        s.declare_prefix("ex", "http://example.org/x#").unwrap();
        let d = s.new_entity("ex:d", Kind::Description).unwrap();
        s.set_label(&d, "line one\nline \"two\"\t\\done").unwrap();
        let text = serialize(&s.snapshot());
        let reparsed = parse(&text).unwrap();
        let d2 = reparsed.resolve("ex:d").unwrap();
        assert_eq!(reparsed.label(&d2), Some("line one\nline \"two\"\t\\done"));
    }

    #[test]
    fn comments_and_whitespace_are_trivia() {
        let text = doc("# a comment\nex:x a f:Event . # trailing comment\n\n# done\n");
        let store = parse(&text).unwrap();
        assert_eq!(store.entity_count(), 1);
    }

    #[test]
    fn lenient_input_shapes() {
        // Trailing `;` before the closing dot is tolerated on input.
        assert!(parse(&doc("ex:x a f:Event ; .\n")).is_ok());
        // Keywords make no objects.
        assert!(matches!(
            parse(&doc("ex:x a f:EventType ;\n    f:classifies a .\n")),
            Err(InterchangeError::Parse(_))
        ));
        // `@prefix` cannot appear mid-statement.
        assert!(matches!(
            parse(&doc("ex:x a @prefix .\n")),
            Err(InterchangeError::Parse(_))
        ));
    }

    #[test]
    fn non_ascii_labels_round_trip() {
        let mut s = Store::new();
        s.declare_prefix("ex", "http://example.org/x#").unwrap();
        let d = s.new_entity("ex:d", Kind::Description).unwrap();
        s.set_label(&d, "café ☕ Überschwemmung").unwrap();
        let text = serialize(&s.snapshot());
        let reparsed = parse(&text).unwrap();
        let d2 = reparsed.resolve("ex:d").unwrap();
        assert_eq!(reparsed.label(&d2), Some("café ☕ Überschwemmung"));
        assert_eq!(serialize(&reparsed.snapshot()), text);
    }

    #[test]
    fn merge_rules_between_documents() {
        let a = doc("ex:x a f:Event .\n");
        let b = doc("ex:x a f:Event .\nex:q a f:Quality .\nex:x f:hasQuality ex:q .\n");
        let mut store = parse(&a).unwrap();
        parse_into(&mut store, &b).unwrap();
        assert_eq!(store.entity_count(), 2);

        // Kind conflicts across documents are load errors.
        let c = doc("ex:x a f:Object .\n");
        assert!(parse_into(&mut store, &c).is_err());

        // Prefix rebinding across documents is a load error too.
        let d = "@prefix ex: <http://other.example.org/> .\nex:y a f:Event .\n";
        assert!(parse_into(&mut store, d).is_err());
    }

    #[test]
    fn relation_tags_round_trip_on_parameters() {
        let mut s = Store::new();
        s.declare_prefix("ex", "http://example.org/x#").unwrap();
        let p = s
            .new_entity("ex:p", Kind::Concept(ConceptKind::Parameter))
            .unwrap();
        s.set_relation_tag(&p, AllenRelation::During).unwrap();
        let text = serialize(&s.snapshot());
        let reparsed = parse(&text).unwrap();
        let p2 = reparsed.resolve("ex:p").unwrap();
        assert_eq!(reparsed.relation_tag(&p2), Some(AllenRelation::During));

        // An unknown relation name is rejected with a position.
        let bad = doc("ex:p a f:Parameter ;\n    f:relation \"sideways\" .\n");
        assert!(matches!(
            parse(&bad),
            Err(InterchangeError::Load(LoadError {
                kind: LoadErrorKind::Lexical(SpacetimeError::UnknownRelation(_)),
                ..
            }))
        ));
    }
}
