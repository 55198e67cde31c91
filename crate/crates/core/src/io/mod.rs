//! Form text syntax and JSON documents.

mod json;
mod text;

pub use json::{form_from_json, form_to_json, report_to_json, JsonForm, JsonReport, JsonTerm};
pub use text::{format_form, parse_form};

use crate::error::Result;
use crate::forms::Form;
use crate::polyring::Context;

/// Reads either format: input starting with `{` is JSON, anything else is
/// text interpreted in `ctx`. A JSON header replaces `ctx`.
pub fn read_form(input: &str, ctx: &Context) -> Result<(Context, Form)> {
    if input.trim_start().starts_with('{') {
        form_from_json(input)
    } else {
        Ok((ctx.clone(), parse_form(input.trim(), ctx)?))
    }
}
