//! Text cleaning and rule-based tokenization.

use regex::Regex;
use std::sync::OnceLock;

/// Punctuation kept by the cleaner and split off by the tokenizer.
pub const KEPT_PUNCT: [char; 5] = ['.', ',', '!', '?', '\''];

fn url_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?:https?://|www\.)\S*").expect("static regex"))
}

fn is_kept(c: char) -> bool {
    c.is_alphabetic() || c.is_whitespace() || KEPT_PUNCT.contains(&c)
}

fn clean_pass(text: &str) -> String {
    // 1. URLs: maximal substrings starting at a scheme marker, up to whitespace.
    let no_urls = url_pattern().replace_all(text, "");
    // 2. digits, 3. everything outside the letter/whitespace/punct whitelist
    // (digits are outside it too, so one filter covers both rules).
    let filtered: String = no_urls.chars().filter(|c| is_kept(*c)).collect();
    // 4. full Unicode lowercasing (diacritics preserved).
    let lowered = filtered.to_lowercase();
    // 5. collapse whitespace runs and trim.
    lowered.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalize raw comment text.
///
/// One pass removes URLs, then digits, then every character that is not a
/// Unicode letter, whitespace, or `.,!?'` (emoji, hashtag marks and other
/// symbols go away; the word behind a `#` stays), lowercases, and collapses
/// whitespace. Passes repeat until the text stops changing, so the function
/// is idempotent even when an earlier removal exposes a new match (e.g. a
/// stripped digit leaving `www.` behind).
pub fn clean_text(raw: &str) -> String {
    let mut current = clean_pass(raw);
    loop {
        let next = clean_pass(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Split cleaned text into tokens.
///
/// Whitespace separates tokens; leading and trailing `.,!?'` characters
/// become tokens of their own, in their original order. Interior
/// punctuation (as in contractions) stays inside the token.
pub fn tokenize(cleaned: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for piece in cleaned.split_whitespace() {
        let chars: Vec<char> = piece.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && KEPT_PUNCT.contains(&chars[start]) {
            start += 1;
        }
        while end > start && KEPT_PUNCT.contains(&chars[end - 1]) {
            end -= 1;
        }
        for &c in &chars[..start] {
            tokens.push(c.to_string());
        }
        if start < end {
            tokens.push(chars[start..end].iter().collect());
        }
        for &c in &chars[end..] {
            tokens.push(c.to_string());
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn removes_urls_digits_symbols_and_lowercases() {
        // Oracle: the five rules applied by hand.
        assert_eq!(
            clean_text("Xem tại https://example.com NGAY 24h #hot"),
            "xem tại ngay h hot"
        );
    }

    #[test]
    fn empty_input() {
        assert_eq!(clean_text(""), "");
    }

    #[test]
    fn lowercase_only_effect_preserves_diacritics() {
        assert_eq!(clean_text("Tao ghét vl."), "tao ghét vl.");
    }

    #[test]
    fn www_urls_removed_up_to_whitespace() {
        assert_eq!(clean_text("see www.foo.vn/bar?x=1 ok"), "see ok");
    }

    #[test]
    fn hashtag_mark_stripped_but_word_kept() {
        assert_eq!(clean_text("#Nóng quá"), "nóng quá");
    }

    #[test]
    fn emoji_and_symbols_removed() {
        assert_eq!(clean_text("vui quá 😀 <3 @ai_đó"), "vui quá aiđó");
    }

    #[test]
    fn exposed_url_fragments_are_cleaned_to_a_fixpoint() {
        // Digit removal turns "ww1w." into "www."; a single pass would leave
        // a string that cleans differently the second time around.
        let once = clean_text("ww1w.");
        assert_eq!(clean_text(&once), once);
    }

    #[test]
    fn tokenize_splits_trailing_punct() {
        assert_eq!(tokenize("tao ghét vl."), vec!["tao", "ghét", "vl", "."]);
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenize_plain_words() {
        assert_eq!(tokenize("a b  c"), vec!["a", "b", "c"]);
    }

    #[test]
    fn tokenize_leading_and_interior_punct() {
        assert_eq!(tokenize("!ơ kìa, don't"), vec!["!", "ơ", "kìa", ",", "don't"]);
        assert_eq!(tokenize("..."), vec![".", ".", "."]);
    }

    proptest! {
        #[test]
        fn clean_text_is_idempotent(s in "\\PC{0,60}") {
            let once = clean_text(&s);
            prop_assert_eq!(clean_text(&once), once);
        }

        #[test]
        fn cleaned_text_contains_only_whitelisted_chars(s in "\\PC{0,60}") {
            let cleaned = clean_text(&s);
            for c in cleaned.chars() {
                prop_assert!(is_kept(c) && !c.is_ascii_digit(), "bad char {:?}", c);
            }
        }

        #[test]
        fn tokens_are_never_empty(s in "\\PC{0,60}") {
            for t in tokenize(&clean_text(&s)) {
                prop_assert!(!t.is_empty());
            }
        }
    }
}
