/// Splits raw text into lowercase alphanumeric tokens.
///
/// Any character that is not a letter or digit separates tokens, so
/// punctuation and hyphens never survive into the output.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for_each_token(text, |t| tokens.push(t.to_owned()));
    tokens
}

/// Normalizes `text` and joins its tokens with single spaces.
pub(crate) fn normalize_line(text: &str) -> (String, u64) {
    let mut out = String::with_capacity(text.len());
    let mut n = 0u64;
    for_each_token(text, |t| {
        if n > 0 {
            out.push(' ');
        }
        out.push_str(t);
        n += 1;
    });
    (out, n)
}

fn for_each_token(text: &str, mut f: impl FnMut(&str)) {
    let mut buf = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            buf.extend(ch.to_lowercase());
        } else if !buf.is_empty() {
            f(&buf);
            buf.clear();
        }
    }
    if !buf.is_empty() {
        f(&buf);
    }
}
