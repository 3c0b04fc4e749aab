//! Page-title normalization and namespace filtering.

/// Namespace prefixes that mark non-article pages.
pub const NON_ARTICLE_PREFIXES: &[&str] = &[
    "Talk",
    "User",
    "User talk",
    "Wikipedia",
    "Wikipedia talk",
    "WP",
    "Project",
    "File",
    "File talk",
    "Image",
    "MediaWiki",
    "MediaWiki talk",
    "Template",
    "Template talk",
    "Help",
    "Help talk",
    "Category",
    "Category talk",
    "Portal",
    "Portal talk",
    "Draft",
    "Draft talk",
    "TimedText",
    "TimedText talk",
    "Module",
    "Module talk",
    "Special",
    "Media",
    "Book",
    "Education Program",
    "Gadget",
    "Gadget definition",
];

/// Canonical form: trimmed, runs of spaces and underscores collapsed to one
/// underscore, first letter upper-cased.
pub fn canonical(title: &str) -> String {
    let mut out = String::with_capacity(title.len());
    let mut pending = false;
    for c in title.trim().chars() {
        if c == ' ' || c == '_' {
            pending = !out.is_empty();
        } else {
            if pending {
                out.push('_');
                pending = false;
            }
            out.push(c);
        }
    }
    let mut chars = out.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => out,
    }
}

/// Human-readable form with spaces.
pub fn display(title: &str) -> String {
    canonical(title).replace('_', " ")
}

pub fn is_article(title: &str) -> bool {
    let shown = display(title);
    match shown.split_once(':') {
        Some((prefix, _)) => !NON_ARTICLE_PREFIXES
            .iter()
            .any(|p| p.eq_ignore_ascii_case(prefix.trim())),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical("network science"), "Network_science");
        assert_eq!(canonical("  Network__ science "), "Network_science");
        assert_eq!(canonical("Network_science"), canonical("Network science"));
        assert_eq!(display("Network_science"), "Network science");
        assert_eq!(canonical("éclair"), "Éclair");
    }

    #[test]
    fn namespaces() {
        assert!(is_article("Graph theory"));
        assert!(is_article("Star Wars: A New Hope"));
        assert!(!is_article("Category:Networks"));
        assert!(!is_article("Template talk:Foo"));
        assert!(!is_article("template_talk:Foo"));
    }
}
