//! Small string helpers shared by synonym generation and graph clean-up.

use alloc::string::String;

use unicode_general_category::{get_general_category, GeneralCategory};

fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

fn is_copyright_mark(c: char) -> bool {
    matches!(c, '\u{00A9}' | '\u{00AE}' | '\u{2122}')
}

/// Drops digits, Unicode punctuation (categories `P*`) and the marks
/// `©`, `®`, `™`. Everything else, including whitespace and case, is kept.
pub(crate) fn strip_digits_punct_marks(s: &str) -> String {
    s.chars()
        .filter(|&c| !(c.is_numeric() || is_punctuation(c) || is_copyright_mark(c)))
        .collect()
}

pub(crate) fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Byte offsets of every occurrence of `needle` in `haystack` that is not
/// glued to a neighbouring letter or digit on either side.
pub(crate) fn bounded_occurrences<'a>(
    haystack: &'a str,
    needle: &'a str,
) -> impl Iterator<Item = (usize, usize)> + 'a {
    let n_first_word = needle.chars().next().is_some_and(is_word_char);
    let n_last_word = needle.chars().next_back().is_some_and(is_word_char);
    haystack
        .match_indices(needle)
        .filter(move |(start, m)| {
            let end = start + m.len();
            let before_ok = !n_first_word
                || haystack[..*start].chars().next_back().is_none_or(|c| !is_word_char(c));
            let after_ok =
                !n_last_word || haystack[end..].chars().next().is_none_or(|c| !is_word_char(c));
            before_ok && after_ok
        })
        .map(move |(start, m)| (start, start + m.len()))
}
