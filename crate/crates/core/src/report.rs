//! Assembled analysis results in presentation-ready form.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::model::MutationModel;
use crate::nullspace::LimitSet;
use crate::tds::RateMatrix;

/// A complete rate-matrix analysis: the operator, its null space, and
/// the limiting frequencies when they are unique. All exact values are
/// rendered as fraction strings so the document round-trips what the
/// computation actually produced.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisDocument {
    pub model: String,
    pub alphabet: String,
    pub k: usize,
    /// Lexicographic word order the matrix rows and columns follow.
    pub words: Vec<String>,
    /// Dense rate matrix, entries as exact fractions.
    pub matrix: Vec<Vec<String>>,
    pub nullity: usize,
    /// Null-space basis vectors, entries as exact fractions.
    pub basis: Vec<Vec<String>>,
    /// Limiting frequencies as exact fractions, when unique.
    pub stationary: Option<Vec<String>>,
    /// The same frequencies as decimals for plotting.
    pub stationary_decimal: Option<Vec<f64>>,
    pub note: Option<String>,
}

impl AnalysisDocument {
    pub fn new(model: &MutationModel, matrix: &RateMatrix, limit: &LimitSet) -> Self {
        let index = matrix.index();
        let words: Vec<String> = index.codes().map(|code| index.render(code)).collect();
        let dense = matrix
            .to_dense()
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.to_string()).collect())
            .collect();
        let basis = limit
            .basis
            .iter()
            .map(|vector| vector.iter().map(|v| v.to_string()).collect())
            .collect();
        let stationary = limit
            .stationary
            .as_ref()
            .map(|freqs| freqs.values().iter().map(|v| v.to_string()).collect());
        let stationary_decimal = limit.stationary.as_ref().map(|freqs| freqs.to_f64());
        let note = if limit.nullity > 1 {
            Some(
                "the limit is not unique: limiting frequencies depend on the initial \
                 string through the listed null-space directions"
                    .to_string(),
            )
        } else {
            None
        };
        AnalysisDocument {
            model: model.describe(),
            alphabet: matrix.index().alphabet().to_string(),
            k: index.k(),
            words,
            matrix: dense,
            nullity: limit.nullity,
            basis,
            stationary,
            stationary_decimal,
            note,
        }
    }

    /// Plain-text rendering with the matrix in aligned columns.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("model: {}\n", self.model));
        out.push_str(&format!("alphabet: {}\n", self.alphabet));
        out.push_str(&format!("word length: {}\n\n", self.k));

        out.push_str("rate matrix (rows follow the word order of the header):\n");
        let mut widths: Vec<usize> = self.words.iter().map(|w| w.len()).collect();
        for row in &self.matrix {
            for (j, entry) in row.iter().enumerate() {
                widths[j] = widths[j].max(entry.len());
            }
        }
        let header: Vec<String> = self
            .words
            .iter()
            .zip(&widths)
            .map(|(w, &width)| format!("{w:>width$}"))
            .collect();
        let label_width = self.words.iter().map(|w| w.len()).max().unwrap_or(0);
        out.push_str(&format!(
            "{:label_width$}  {}\n",
            "",
            header.join("  ")
        ));
        for (word, row) in self.words.iter().zip(&self.matrix) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(entry, &width)| format!("{entry:>width$}"))
                .collect();
            out.push_str(&format!("{word:>label_width$}  {}\n", cells.join("  ")));
        }

        out.push_str(&format!("\nnull space dimension: {}\n", self.nullity));
        for (i, vector) in self.basis.iter().enumerate() {
            out.push_str(&format!("basis vector {}: [{}]\n", i + 1, vector.join(", ")));
        }
        match (&self.stationary, &self.stationary_decimal) {
            (Some(exact), Some(decimal)) => {
                out.push_str("\nlimiting frequencies:\n");
                for ((word, frac), dec) in self.words.iter().zip(exact).zip(decimal) {
                    out.push_str(&format!("  x^{word} = {frac} = {dec:.10}\n"));
                }
            }
            _ => {
                if let Some(note) = &self.note {
                    out.push_str(&format!("\nnote: {note}\n"));
                }
            }
        }
        out
    }
}

/// Rounds a float to a fixed shorter precision for display; data files
/// keep full precision separately.
pub fn display_float(v: f64) -> String {
    if let Some(r) = crate::Rational::from_float(v) {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if d <= 64 && n.abs() <= 1024 {
                return format!("{n}/{d}");
            }
        }
    }
    format!("{v:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::kmer::KmerIndex;
    use crate::nullspace::null_space_limit;
    use crate::rat;
    use crate::tds::build_rate_matrix;

    #[test]
    fn document_carries_exact_fractions() {
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let index = KmerIndex::new(&Alphabet::binary(), 2).unwrap();
        let matrix = build_rate_matrix(&model, &index).unwrap();
        let limit = null_space_limit(&matrix).unwrap();
        let doc = AnalysisDocument::new(&model, &matrix, &limit);
        assert_eq!(doc.words, vec!["00", "01", "10", "11"]);
        assert_eq!(doc.nullity, 1);
        assert_eq!(
            doc.stationary.as_ref().unwrap(),
            &vec!["5/14", "1/7", "1/7", "5/14"]
        );
        assert_eq!(doc.matrix[0][0], "-1/2");
        let text = doc.render_text();
        assert!(text.contains("x^00 = 5/14"));
        assert!(text.contains("null space dimension: 1"));
    }

    #[test]
    fn nonunique_limits_are_noted() {
        let model = MutationModel::tds(vec![rat(0, 1), rat(1, 1)]).unwrap();
        let index = KmerIndex::new(&Alphabet::binary(), 2).unwrap();
        let matrix = build_rate_matrix(&model, &index).unwrap();
        let limit = null_space_limit(&matrix).unwrap();
        let doc = AnalysisDocument::new(&model, &matrix, &limit);
        assert_eq!(doc.nullity, 2);
        assert!(doc.stationary.is_none());
        assert!(doc.render_text().contains("not unique"));
    }

    #[test]
    fn float_display_prefers_small_fractions() {
        assert_eq!(display_float(0.25), "1/4");
        assert_eq!(display_float(0.1234567), "0.123457");
    }
}
