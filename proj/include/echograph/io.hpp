#pragma once

// File formats for every pipeline artifact: edge lists, article records,
// user tables, embeddings (text + binary), split plans, key-value reports,
// manifests, walk corpora, predictions, vocabularies and the dense
// classifier. All text formats are UTF-8 and line-oriented; every reader
// reports parse failures with 1-based line numbers. Nothing here embeds
// timestamps, so identical runs produce byte-identical artifacts.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "echograph/embedding.hpp"
#include "echograph/eval.hpp"
#include "echograph/graph.hpp"
#include "echograph/newsmodel.hpp"
#include "echograph/textbase.hpp"
#include "echograph/walks.hpp"

namespace echograph {

// Thrown for malformed input files; message includes path and line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- edges ------------------------------------------------------------
// One edge per line: `src<TAB>dst`; `#` starts a comment line; blank lines
// are ignored.
std::vector<EdgeRecord> read_edge_file(const std::string& path);
void write_edge_file(const std::string& path,
                     const std::vector<EdgeRecord>& edges);
void write_edge_file(const std::string& path, const DirectedGraph& g,
                     const UserTable& users);

// --- articles ---------------------------------------------------------
// One JSON object per line with fields: article_id (string), label
// ("fake"/"factual"), text (string), tweets (string array),
// engaged_users (string array of external user ids).
std::vector<RawArticle> read_article_file(const std::string& path);
void write_article_file(const std::string& path,
                        const std::vector<RawArticle>& articles);

// --- user table ---------------------------------------------------------
// `external_id<TAB>missing_flag(0|1)` per line, in node-index order.
void write_user_table(const std::string& path, const UserTable& users);
UserTable read_user_table(const std::string& path);

// --- embeddings ---------------------------------------------------------
// Text: header `n_rows dim`, then `external_id v1 ... vdim` (%.17g).
// Binary: magic "EGEB", uint32 n_rows, uint32 dim, then per row a uint32
// id length, the id bytes, and dim little-endian float32 values.
struct EmbeddingFile {
  std::vector<std::string> ids;
  EmbeddingMatrix matrix;
};
void write_embeddings(const std::string& path, const EmbeddingMatrix& emb,
                      const std::vector<std::string>& ids, bool binary);
EmbeddingFile read_embeddings(const std::string& path);

// Aligns an embedding file against a user table: row i of the result is the
// vector for node i. Users without a row in the file (flagged missing, or
// simply absent) receive the sentinel all-(-1) vector. Ids in the file that
// the table does not know are an error.
EmbeddingMatrix align_embeddings(const EmbeddingFile& file,
                                 const UserTable& users);

// --- split plans ----------------------------------------------------------
// `article_id<TAB>role` per line, role in {train, valid, test}.
void write_split_file(const std::string& path,
                      const std::vector<std::string>& article_ids,
                      const std::vector<SplitRole>& roles);
std::vector<std::pair<std::string, SplitRole>> read_split_file(
    const std::string& path);

// --- key-value reports (also the manifest format) -------------------------
// `key<TAB>value` per line; keys unique, order preserved.
using KvReport = std::vector<std::pair<std::string, std::string>>;
void write_kv_file(const std::string& path, const KvReport& kv);
KvReport read_kv_file(const std::string& path);

// Flat config files: same key<TAB>value shape as reports.
// Missing file -> error; unknown keys are the caller's concern.

// --- walk corpus -----------------------------------------------------------
// One walk per line, space-separated node indices.
void write_walk_corpus(const std::string& path, const WalkCorpus& corpus);

// --- predictions -------------------------------------------------------
// CSV with header `article_id,probability,label`.
struct PredictionRow {
  std::string article_id;
  double probability = 0.0;
  Label label = Label::factual;
};
void write_predictions(const std::string& path,
                       const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> read_predictions(const std::string& path);

// --- vocabulary dump ---------------------------------------------------
// `token<TAB>df<TAB>idf` per line in model column order.
void write_vocabulary(const std::string& path, const TfidfModel& model);

// --- community ground truth (synthetic data) ----------------------------
// `external_id<TAB>community` per line.
void write_communities(const std::string& path,
                       const std::vector<std::string>& ids,
                       const std::vector<int>& community);
std::vector<std::pair<std::string, int>> read_communities(
    const std::string& path);

// --- dense classifier ----------------------------------------------------
// Text format: dim, standardization mean/std vectors, weights, bias.
void write_classifier(const std::string& path, const DenseClassifier& clf);
DenseClassifier read_classifier(const std::string& path);

// --- helpers ---------------------------------------------------------------
std::string format_real(double v);             // %.17g round-trip formatting
void ensure_dir(const std::string& path);      // mkdir -p semantics
bool file_exists(const std::string& path);

}  // namespace echograph
