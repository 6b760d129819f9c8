//! Readers, retrievers and index artifacts named on the command line.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use zeqr::ingest::{load_collection, Document, IdfTable};
use zeqr::reader::{ChatCompletionsGenerator, EchoReader, GenerativeReader, OracleReader, RemoteReader, RetryPolicy};
use zeqr::retrieval::{Bm25Params, Bm25Retriever, ExternalRetriever, InvertedIndex};
use zeqr::{Config, Reader, Retriever};

use crate::args::BackendArgs;
use crate::error::CliError;
use crate::settings::{required, FileConfig};

pub const INDEX_FILE: &str = "index.json";
pub const IDF_FILE: &str = "idf.tsv";
pub const DOCS_FILE: &str = "docs.jsonl";

/// Parses `oracle:PATH`, `remote:URL`, `generative:URL` or `echo`.
pub fn reader_from_arg(arg: &str, model: Option<&str>) -> Result<Arc<dyn Reader>, CliError> {
    let (kind, rest) = arg.split_once(':').unwrap_or((arg, ""));
    Ok(match kind {
        "oracle" if !rest.is_empty() => Arc::new(OracleReader::from_json_file(Path::new(rest))?),
        "remote" if !rest.is_empty() => Arc::new(RemoteReader::new(rest, RetryPolicy::default())),
        "generative" if !rest.is_empty() => {
            let model = model.ok_or_else(|| CliError::usage("a generative reader needs --model"))?;
            let key = std::env::var("ZEQR_API_KEY").ok();
            let generator = ChatCompletionsGenerator::new(rest, model, key, RetryPolicy::default());
            Arc::new(GenerativeReader::new(format!("generative:{rest}"), generator))
        }
        "echo" => Arc::new(EchoReader),
        _ => {
            return Err(CliError::usage(format!(
                "unknown reader `{arg}` (expected oracle:PATH, remote:URL, generative:URL or echo)"
            )))
        }
    })
}

/// Everything `run` and `repl` need besides the topics.
pub struct Backend {
    pub reader: Arc<dyn Reader>,
    pub retriever: Arc<dyn Retriever>,
    pub idf: IdfTable,
    /// Document bodies, when an index directory was given.
    pub documents: Option<Vec<Document>>,
}

impl Backend {
    pub fn open(args: &BackendArgs, file: &FileConfig, config: &Config) -> Result<Self, CliError> {
        let reader_spec = required(&args.reader, &file.reader, "reader")?;
        let model = args.model.clone().or_else(|| file.model.clone());
        let reader = reader_from_arg(&reader_spec, model.as_deref())?;
        let retriever_spec = args.retriever.clone().or_else(|| file.retriever.clone()).unwrap_or_else(|| "bm25".into());
        let index_dir = args.index.clone().or_else(|| file.index.clone());

        let retriever: Arc<dyn Retriever> = if retriever_spec == "bm25" {
            let dir = index_dir
                .as_ref()
                .ok_or_else(|| CliError::usage("the bm25 retriever needs --index"))?;
            let index = InvertedIndex::load(&dir.join(INDEX_FILE))?;
            Arc::new(Bm25Retriever::new(Arc::new(index), Bm25Params::from(config)))
        } else if retriever_spec.starts_with("http://") || retriever_spec.starts_with("https://") {
            Arc::new(ExternalRetriever::new(&retriever_spec, RetryPolicy::default()))
        } else {
            return Err(CliError::usage(format!(
                "unknown retriever `{retriever_spec}` (expected bm25 or an http(s) URL)"
            )));
        };

        let idf_path: PathBuf = match (args.idf.clone().or_else(|| file.idf_cache.clone()), &index_dir) {
            (Some(p), _) => p,
            (None, Some(dir)) => dir.join(IDF_FILE),
            (None, None) => return Err(CliError::usage("missing --idf (or --index containing an IDF table)")),
        };
        let idf = IdfTable::read_cache(&idf_path)?;
        let documents = match &index_dir {
            Some(dir) if dir.join(DOCS_FILE).exists() => Some(load_collection(&dir.join(DOCS_FILE))?),
            _ => None,
        };
        Ok(Backend { reader, retriever, idf, documents })
    }
}
