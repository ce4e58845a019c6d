//! Coded storage: `m` files of shape `b x k` are stacked into an
//! `(m*b) x k` matrix `X` and spread over `n` servers as `Y = X * G`,
//! server `j` holding column `j` of `Y`.

use crate::algebra::Matrix;
use crate::codes::LinearCode;

use super::PirError;

#[derive(Debug, Clone)]
pub struct StorageSystem {
    code: LinearCode,
    files: Vec<Matrix>,
    rows_per_file: usize,
    encoded: Matrix,
}

impl StorageSystem {
    /// Encodes `files` (each `b x k` over the storage code's field) across
    /// the code's `n` servers.
    pub fn encode(code: LinearCode, files: Vec<Matrix>) -> Result<Self, PirError> {
        if files.is_empty() {
            return Err(PirError::ShapeMismatch(
                "at least one file is required".into(),
            ));
        }
        let k = code.dim();
        let b = files[0].rows();
        if b == 0 {
            return Err(PirError::ShapeMismatch("files need at least one row".into()));
        }
        for f in &files {
            if f.cols() != k || f.rows() != b || **f.field() != **code.field() {
                return Err(PirError::ShapeMismatch(format!(
                    "every file must be {b} x {k} over the storage field"
                )));
            }
        }
        let mut stacked = files[0].clone();
        for f in &files[1..] {
            stacked = stacked.vstack(f)?;
        }
        let encoded = stacked.mul(code.generator())?;
        Ok(StorageSystem { code, files, rows_per_file: b, encoded })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn server_count(&self) -> usize {
        self.code.len()
    }

    pub fn file_count(&self) -> usize {
        self.files.len()
    }

    pub fn rows_per_file(&self) -> usize {
        self.rows_per_file
    }

    /// Total stacked rows `m * b`: the length of every query vector.
    pub fn stacked_rows(&self) -> usize {
        self.encoded.rows()
    }

    pub fn file(&self, w: usize) -> &Matrix {
        &self.files[w]
    }

    /// What server `j` stores: column `j` of the encoded stack.
    pub fn server_column(&self, j: usize) -> Vec<u64> {
        (0..self.encoded.rows()).map(|r| self.encoded.get(r, j)).collect()
    }

    /// The encoded symbol `Y[row, j]`.
    pub fn encoded_symbol(&self, row: usize, j: usize) -> u64 {
        self.encoded.get(row, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Matrix};
    use crate::families::grs;

    #[test]
    fn repetition_servers_store_the_stack() {
        let f2 = Field::new(2, 1, None).unwrap();
        let gen = Matrix::from_rows(f2.clone(), vec![vec![1, 1, 1]]).unwrap();
        let code = LinearCode::from_generator(f2.clone(), gen).unwrap();
        let files = vec![
            Matrix::from_rows(f2.clone(), vec![vec![1]]).unwrap(),
            Matrix::from_rows(f2, vec![vec![0]]).unwrap(),
        ];
        let sys = StorageSystem::encode(code, files).unwrap();
        for j in 0..3 {
            assert_eq!(sys.server_column(j), vec![1, 0]);
        }
    }

    #[test]
    fn grs_servers_store_evaluations() {
        let f5 = Field::new(5, 1, None).unwrap();
        let code = grs(f5.clone(), 4, 2, &[0, 1, 2, 3], &[1, 1, 1, 1]).unwrap();
        let file = Matrix::from_rows(f5, vec![vec![1, 2]]).unwrap();
        let sys = StorageSystem::encode(code, vec![file]).unwrap();
        // The canonical generator is systematic on the pivot columns, so the
        // stored word is the evaluation of the degree-1 polynomial through
        // f(0) = 1, f(1) = 2, i.e. f(x) = 1 + x.
        for (j, expect) in [(0u64, 1u64), (1, 2), (2, 3), (3, 4)] {
            assert_eq!(sys.server_column(j as usize), vec![expect]);
        }
        // And it is a codeword of the GRS code.
        let stored: Vec<u64> = (0..4).map(|j| sys.server_column(j)[0]).collect();
        assert!(sys.code().contains(&stored));
    }

    #[test]
    fn wrong_width_rejected() {
        let f2 = Field::new(2, 1, None).unwrap();
        let gen = Matrix::from_rows(f2.clone(), vec![vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let code = LinearCode::from_generator(f2.clone(), gen).unwrap();
        let file = Matrix::from_rows(f2, vec![vec![1, 0, 1]]).unwrap();
        assert!(matches!(
            StorageSystem::encode(code, vec![file]),
            Err(PirError::ShapeMismatch(_))
        ));
    }
}
