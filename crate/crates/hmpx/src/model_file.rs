use std::fs;
use std::path::Path;

use hmpx_core::HmpModel;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// On-disk model: `{"transition": [[..]], "noise": [[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub transition: Vec<Vec<f64>>,
    pub noise: Vec<Vec<f64>>,
}

impl ModelFile {
    pub fn from_model(model: &HmpModel) -> Self {
        Self { transition: model.transition().to_rows(), noise: model.noise().to_rows() }
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| CliError::ModelParse { path: path.to_owned(), source })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::ModelRead { path: path.to_owned(), source })?;
        Self::parse(&text, path)
    }

    pub fn to_model(&self) -> Result<HmpModel> {
        Ok(HmpModel::from_rows(&self.transition, &self.noise)?)
    }
}

pub fn load_model(path: &Path) -> Result<HmpModel> {
    ModelFile::read(path)?.to_model()
}
