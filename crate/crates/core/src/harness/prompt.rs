//! The fixed zero-shot prompt texts and their rendering.
//!
//! Texts are stored exactly as used when the benchmark transcripts were
//! gathered, wording quirks included; changing a byte changes every prompt
//! hash and orphans existing replay fixtures. `{language}` and
//! `{sequence}` are substitution slots; templates without a sequence slot
//! get the sequence appended on its own line.

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PromptTemplate {
    pub id: &'static str,
    pub text: &'static str,
    pub needs_language: bool,
}

pub const TEMPLATES: &[PromptTemplate] = &[
    PromptTemplate {
        id: "code",
        text: "With no additional explanations or comments or notes, write the code in \
               {language} programming language to produce the sequence {sequence}.",
        needs_language: true,
    },
    PromptTemplate {
        id: "free-form-python",
        text: "Without any kind of comments, explanation, or additional text, give me a Python \
               program to generate the following list of sequences. One script per sequence. \
               Print them also as a list of scripts in flat ASCII, one per row, separated by \
               commas.",
        needs_language: false,
    },
    PromptTemplate {
        id: "free-form-formula",
        text: "Without any kind of comments, explanations, or additional text, give me a formula \
               or a model to generate the following list of sequences. One model or formula per \
               sequence. Print them also as a list of formulas in flat ASCII, one per row, \
               separated new lines.",
        needs_language: false,
    },
    PromptTemplate {
        id: "shortest-program",
        text: "Without any kind of comments, or explanations, or additional text give me the \
               shortest computer program in any programming language to generate the following \
               list of sequences. One script per sequence. Try hard. Print them also as a list \
               of scripts in flat ASCII, one per row, separated by commas.",
        needs_language: false,
    },
    PromptTemplate {
        id: "formula-flat",
        text: "Without any kind of comment, or explanations, or additional text provide a \
               formula or a model to generate the following list of sequences. One model or \
               formula per sequence. Print them also as a list of formulas in flat ASCII, one \
               per row, separated by new lines",
        needs_language: false,
    },
    PromptTemplate {
        id: "multi-script",
        text: "For each of the following numeric sequences, please, without any kind of comment, \
               nor explanations nor even text give me more than one script in Python to generate \
               each of them. List all solutions per sequence separated by commas in a single \
               row, for example: \"script1\", \"script2\", ... Print them as a list of script \
               lists in flat ASCII, one per row, and for each new sequence create a new list in \
               a new line. If you do not find any program for any of the numeric sequence, write \
               *not found*.",
        needs_language: false,
    },
];

pub fn template(id: &str) -> Result<&'static PromptTemplate, HarnessError> {
    TEMPLATES
        .iter()
        .find(|t| t.id == id)
        .ok_or_else(|| HarnessError::UnknownTemplate(id.to_string()))
}

/// Substitute the encoded sequence (and language, where the template has a
/// slot for one) into the stored text. Pure function of its inputs.
pub fn render_prompt(
    template_id: &str,
    sequence: &str,
    language: Option<&str>,
) -> Result<String, HarnessError> {
    let t = template(template_id)?;
    let mut text = t.text.to_string();
    if t.needs_language {
        let language = language.ok_or_else(|| HarnessError::MissingSlot {
            template: template_id.to_string(),
            slot: "language".to_string(),
        })?;
        text = text.replace("{language}", language);
    }
    if text.contains("{sequence}") {
        Ok(text.replace("{sequence}", sequence))
    } else {
        Ok(format!("{text}\n{sequence}"))
    }
}

/// An explicit "not found" answer, the refusal form the multi-script
/// prompt invites. Refusals score as incorrect but are counted separately
/// in the report's answer-type breakdown.
pub fn is_refusal(response_text: &str) -> bool {
    response_text.trim().trim_matches('*').trim().eq_ignore_ascii_case("not found")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_form_prompt_carries_the_request_and_the_sequence() {
        let text = render_prompt("free-form-formula", "1,2,3", None).unwrap();
        assert!(text.contains("generate the following list of sequences"));
        assert!(text.ends_with("\n1,2,3"));
    }

    #[test]
    fn code_prompt_fills_both_slots() {
        let text = render_prompt("code", "2,4,6,8", Some("Python")).unwrap();
        assert!(text.contains("write the code in"));
        assert!(text.contains("Python programming language"));
        assert!(text.contains("to produce the sequence 2,4,6,8."));
        assert!(!text.contains('{'), "all slots must be substituted");
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render_prompt("shortest-program", "0,1,0,1", None).unwrap();
        let b = render_prompt("shortest-program", "0,1,0,1", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_slot_and_unknown_template_are_errors() {
        assert!(matches!(
            render_prompt("code", "1,2", None),
            Err(HarnessError::MissingSlot { .. })
        ));
        assert!(matches!(
            render_prompt("chain-of-thought", "1,2", None),
            Err(HarnessError::UnknownTemplate(_))
        ));
    }

    #[test]
    fn every_template_renders_without_leftover_slots() {
        for t in TEMPLATES {
            let text = render_prompt(t.id, "5,6,7", Some("R")).unwrap();
            assert!(!text.contains("{sequence}"));
            assert!(!text.contains("{language}"));
            assert!(text.contains("5,6,7"));
        }
    }

    #[test]
    fn refusal_detection_accepts_the_invited_form_only() {
        assert!(is_refusal("not found"));
        assert!(is_refusal("*not found*"));
        assert!(is_refusal("  Not Found  "));
        assert!(!is_refusal("the sequence was not found by me"));
        assert!(!is_refusal("a(n) = n"));
        assert!(!is_refusal(""));
    }
}
