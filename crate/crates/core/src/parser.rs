//! Tokenizer and recursive-descent parser for a controlled fragment of
//! French: locative clauses `NP est Prep NP` and bare noun phrases with
//! right-nested genitive complements.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::ontology::Definiteness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Determiner,
    Preposition,
    Copula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    /// Byte offset into the original input.
    pub position: usize,
}

impl Token {
    fn new(surface: impl Into<String>, position: usize) -> Self {
        let surface = surface.into();
        let kind = match surface.as_str() {
            "le" | "la" | "les" | "un" | "une" | "des" => TokenKind::Determiner,
            "à" | "de" | "dans" | "sur" | "sous" | "par" | "à travers" | "au-dessus" => {
                TokenKind::Preposition
            }
            "est" => TokenKind::Copula,
            _ => TokenKind::Word,
        };
        Token { surface, kind, position }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '\'' | '’' | '-')
}

/// Raw word spans of the input: `(byte offset, text)`.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (is_word_char(c), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

/// Split elided articles off the front of a word and drop stray quotes.
fn split_elision(pos: usize, word: &str, out: &mut Vec<(usize, String)>) {
    let mut pos = pos;
    let mut rest = word;
    loop {
        let lower_head: String = rest.chars().take(1).flat_map(char::to_lowercase).collect();
        let after_head = rest.char_indices().nth(1).map_or(rest.len(), |(i, _)| i);
        let quote = rest[after_head..].chars().next().filter(|c| matches!(c, '\'' | '’'));
        match (lower_head.as_str(), quote) {
            ("l" | "d", Some(q)) => {
                out.push((pos, if lower_head == "l" { "le" } else { "de" }.to_owned()));
                let skip = after_head + q.len_utf8();
                pos += skip;
                rest = &rest[skip..];
            }
            _ => break,
        }
    }
    // any other apostrophe separates words
    let mut seg = 0;
    for (i, c) in rest.char_indices().chain(std::iter::once((rest.len(), '\''))) {
        if matches!(c, '\'' | '’') {
            let piece = &rest[seg..i];
            if piece.chars().any(|c| c != '-') {
                out.push((pos + seg, piece.to_lowercase()));
            }
            seg = i + c.len_utf8();
        }
    }
}

/// Lowercase, expand contractions and elisions, fuse compound prepositions.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut pieces = Vec::new();
    for (pos, word) in words(text) {
        split_elision(pos, word, &mut pieces);
    }
    let mut expanded: Vec<Token> = Vec::with_capacity(pieces.len() + 4);
    for (pos, piece) in pieces {
        match piece.as_str() {
            "au" => expanded.extend([Token::new("à", pos), Token::new("le", pos + 1)]),
            "aux" => expanded.extend([Token::new("à", pos), Token::new("les", pos + 1)]),
            "du" => expanded.extend([Token::new("de", pos), Token::new("le", pos + 1)]),
            _ => expanded.push(Token::new(piece, pos)),
        }
    }
    let mut out: Vec<Token> = Vec::with_capacity(expanded.len());
    let mut iter = expanded.into_iter().peekable();
    while let Some(tok) = iter.next() {
        match tok.surface.as_str() {
            "à" if iter.peek().is_some_and(|n| n.surface == "travers") => {
                iter.next();
                out.push(Token::new("à travers", tok.position));
            }
            "au-dessus" => {
                out.push(tok);
                match iter.peek().map(|n| n.surface.as_str()) {
                    Some("de") => {
                        iter.next();
                    }
                    Some("des") => {
                        let des = iter.next().expect("peeked");
                        out.push(Token::new("les", des.position));
                    }
                    _ => {}
                }
            }
            _ => out.push(tok),
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

/// [`tokenize`], then fuse runs of words that form a multiword lemma,
/// longest match first.
pub fn tokenize_with(text: &str, lexicon: &Lexicon) -> Result<Vec<Token>> {
    let tokens = tokenize(text)?;
    let max = lexicon.max_lemma_words().max(1);
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let mut taken = 1;
        for n in (2..=max.min(tokens.len() - i)).rev() {
            let run = &tokens[i..i + n];
            if run.iter().all(|t| t.kind == TokenKind::Word) {
                let joined = run.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
                if lexicon.get(&joined).is_some() {
                    out.push(Token { surface: joined, kind: TokenKind::Word, position: run[0].position });
                    taken = n;
                    break;
                }
            }
        }
        if taken == 1 {
            out.push(tokens[i].clone());
        }
        i += taken;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preposition {
    A,
    Dans,
    Sur,
    Sous,
    Par,
    ATravers,
    AuDessus,
}

impl Preposition {
    pub const ALL: [Preposition; 7] = [
        Preposition::A,
        Preposition::Dans,
        Preposition::Sur,
        Preposition::Sous,
        Preposition::Par,
        Preposition::ATravers,
        Preposition::AuDessus,
    ];

    fn from_surface(s: &str) -> Option<Self> {
        Some(match s {
            "à" => Preposition::A,
            "dans" => Preposition::Dans,
            "sur" => Preposition::Sur,
            "sous" => Preposition::Sous,
            "par" => Preposition::Par,
            "à travers" => Preposition::ATravers,
            "au-dessus" => Preposition::AuDessus,
            _ => return None,
        })
    }

    pub fn surface(self) -> &'static str {
        match self {
            Preposition::A => "à",
            Preposition::Dans => "dans",
            Preposition::Sur => "sur",
            Preposition::Sous => "sous",
            Preposition::Par => "par",
            Preposition::ATravers => "à travers",
            Preposition::AuDessus => "au-dessus de",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NounPhrase {
    pub definiteness: Definiteness,
    pub head: String,
    pub complement: Option<Box<NounPhrase>>,
}

impl NounPhrase {
    pub fn new(definiteness: Definiteness, head: &str) -> Self {
        NounPhrase { definiteness, head: head.to_owned(), complement: None }
    }

    pub fn of(mut self, complement: NounPhrase) -> Self {
        self.complement = Some(Box::new(complement));
        self
    }

    /// Number of nested genitive complements.
    pub fn depth(&self) -> usize {
        self.complement.as_ref().map_or(0, |c| 1 + c.depth())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ast {
    Locative { target: NounPhrase, prep: Preposition, site: NounPhrase },
    NounPhrase { np: NounPhrase },
}

struct Parser<'a> {
    tokens: &'a [Token],
    lexicon: &'a Lexicon,
    end: usize,
    i: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.i)
    }

    fn position(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn syntax<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax { position: self.position(), expected: expected.to_owned() })
    }

    fn sentence(&mut self) -> Result<Ast> {
        let np = self.noun_phrase(false)?;
        let ast = match self.peek() {
            Some(t) if t.kind == TokenKind::Copula => {
                self.i += 1;
                let prep = match self.peek().and_then(|t| Preposition::from_surface(&t.surface)) {
                    Some(p) => p,
                    None => return self.syntax("preposition"),
                };
                self.i += 1;
                let site = self.noun_phrase(false)?;
                Ast::Locative { target: np, prep, site }
            }
            _ => Ast::NounPhrase { np },
        };
        if self.peek().is_some() {
            return self.syntax("end of input");
        }
        Ok(ast)
    }

    fn noun(&mut self) -> Result<&'a Token> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Word => {
                if self.lexicon.get(&t.surface).is_none() {
                    return Err(Error::UnknownWord { lemma: t.surface.clone(), position: t.position });
                }
                self.i += 1;
                Ok(t)
            }
            _ => self.syntax("noun"),
        }
    }

    /// `bare` allows a determiner-less common noun, read as indefinite.
    fn noun_phrase(&mut self, bare: bool) -> Result<NounPhrase> {
        let definiteness = match self.peek() {
            Some(t) if t.kind == TokenKind::Determiner => {
                self.i += 1;
                match t.surface.as_str() {
                    "le" | "la" | "les" => Definiteness::Definite,
                    _ => Definiteness::Indefinite,
                }
            }
            Some(t) if t.kind == TokenKind::Word => match self.lexicon.get(&t.surface) {
                None => {
                    return Err(Error::UnknownWord { lemma: t.surface.clone(), position: t.position })
                }
                Some(e) if e.proper => Definiteness::Proper,
                Some(_) if bare => Definiteness::Indefinite,
                Some(_) => return self.syntax("determiner or proper name"),
            },
            _ => return self.syntax("noun phrase"),
        };
        self.head_and_complement(definiteness)
    }

    fn head_and_complement(&mut self, definiteness: Definiteness) -> Result<NounPhrase> {
        let head = self.noun()?.surface.clone();
        let complement = match self.peek() {
            Some(t) if t.surface == "de" => {
                self.i += 1;
                Some(Box::new(self.noun_phrase(true)?))
            }
            // `des` right after a noun is the genitive de + les
            Some(t) if t.surface == "des" => {
                self.i += 1;
                Some(Box::new(self.head_and_complement(Definiteness::Definite)?))
            }
            _ => None,
        };
        Ok(NounPhrase { definiteness, head, complement })
    }
}

pub fn parse_tokens(tokens: &[Token], text_len: usize, lexicon: &Lexicon) -> Result<Ast> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    Parser { tokens, lexicon, end: text_len, i: 0 }.sentence()
}

pub fn parse(text: &str, lexicon: &Lexicon) -> Result<Ast> {
    let tokens = tokenize_with(text, lexicon)?;
    parse_tokens(&tokens, text.len(), lexicon)
}

fn starts_with_vowel(s: &str) -> bool {
    s.chars().next().is_some_and(|c| "aeiouyàâäéèêëîïôöùûü".contains(c))
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Surface form of `np` introduced by the preposition `de`, `à` or nothing.
fn render_np(np: &NounPhrase, prep: Option<&str>, out: &mut String) {
    let head = if np.definiteness == Definiteness::Proper { capitalize(&np.head) } else { np.head.clone() };
    let vowel = starts_with_vowel(&np.head);
    let text = match (prep, np.definiteness) {
        (None, Definiteness::Proper) => head,
        (None, Definiteness::Definite) if vowel => format!("l'{head}"),
        (None, Definiteness::Definite) => format!("le {head}"),
        (None, Definiteness::Indefinite) => format!("un {head}"),
        (Some("de"), Definiteness::Proper) if vowel => format!("d'{head}"),
        (Some("de"), Definiteness::Definite) if !vowel => format!("du {head}"),
        (Some("de"), Definiteness::Indefinite) => format!("d'un {head}"),
        (Some("à"), Definiteness::Definite) if !vowel => format!("au {head}"),
        (Some(p), Definiteness::Proper) => format!("{p} {head}"),
        (Some(p), Definiteness::Definite) if vowel => format!("{p} l'{head}"),
        (Some(p), Definiteness::Definite) => format!("{p} le {head}"),
        (Some(p), Definiteness::Indefinite) => format!("{p} un {head}"),
    };
    out.push_str(&text);
    if let Some(c) = &np.complement {
        out.push(' ');
        render_np(c, Some("de"), out);
    }
}

impl fmt::Display for NounPhrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render_np(self, None, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        match self {
            Ast::NounPhrase { np } => render_np(np, None, &mut s),
            Ast::Locative { target, prep, site } => {
                render_np(target, None, &mut s);
                s.push_str(" est ");
                match prep {
                    Preposition::A => render_np(site, Some("à"), &mut s),
                    Preposition::AuDessus => {
                        s.push_str("au-dessus ");
                        render_np(site, Some("de"), &mut s);
                    }
                    p => render_np(site, Some(p.surface()), &mut s),
                }
            }
        }
        f.write_str(&s)
    }
}
