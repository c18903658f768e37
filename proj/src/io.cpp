#include "echograph/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace echograph {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ParseError(path + ": cannot open for writing");
  return out;
}

// Splits a line at tabs. Returns false for blank and comment lines.
bool split_tabs(const std::string& line, std::vector<std::string>& fields) {
  if (line.empty() || line[0] == '#') return false;
  fields.clear();
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return true;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double parse_real(const std::string& s, const std::string& path,
                  std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(path, line, "trailing characters in number");
    return v;
  } catch (const std::logic_error&) {
    fail(path, line, "expected a number, got '" + s + "'");
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::filesystem::create_directories(path);
}

bool file_exists(const std::string& path) {
  return std::filesystem::exists(path);
}

// --- edges -------------------------------------------------------------

std::vector<EdgeRecord> read_edge_file(const std::string& path) {
  auto in = open_in(path);
  std::vector<EdgeRecord> edges;
  std::string line;
  std::vector<std::string> fields;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (!split_tabs(line, fields)) continue;
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      fail(path, lineno, "expected 'src<TAB>dst'");
    }
    edges.push_back({fields[0], fields[1]});
  }
  return edges;
}

void write_edge_file(const std::string& path,
                     const std::vector<EdgeRecord>& edges) {
  auto out = open_out(path);
  for (const auto& e : edges) out << e.src << '\t' << e.dst << '\n';
}

void write_edge_file(const std::string& path, const DirectedGraph& g,
                     const UserTable& users) {
  auto out = open_out(path);
  for (NodeId u = 0; u < g.n_nodes(); ++u) {
    for (NodeId v : g.out_adj[static_cast<std::size_t>(u)]) {
      out << users.external_id[static_cast<std::size_t>(u)] << '\t'
          << users.external_id[static_cast<std::size_t>(v)] << '\n';
    }
  }
}

// --- articles ----------------------------------------------------------

std::vector<RawArticle> read_article_file(const std::string& path) {
  auto in = open_in(path);
  std::vector<RawArticle> articles;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail(path, lineno, "invalid JSON object");
    RawArticle a;
    try {
      a.article_id = j.at("article_id").get<std::string>();
      a.label = label_from_string(j.at("label").get<std::string>());
      a.text = j.value("text", std::string());
      for (const auto& t : j.value("tweets", json::array())) {
        a.tweets.push_back(t.get<std::string>());
      }
      for (const auto& u : j.value("engaged_users", json::array())) {
        a.engaged_users.push_back(u.get<std::string>());
      }
    } catch (const std::exception& e) {
      fail(path, lineno, e.what());
    }
    articles.push_back(std::move(a));
  }
  return articles;
}

void write_article_file(const std::string& path,
                        const std::vector<RawArticle>& articles) {
  auto out = open_out(path);
  for (const auto& a : articles) {
    json j;
    j["article_id"] = a.article_id;
    j["label"] = to_string(a.label);
    j["text"] = a.text;
    j["tweets"] = a.tweets;
    j["engaged_users"] = a.engaged_users;
    out << j.dump() << '\n';
  }
}

// --- user table ----------------------------------------------------------

void write_user_table(const std::string& path, const UserTable& users) {
  auto out = open_out(path);
  for (NodeId i = 0; i < users.size(); ++i) {
    out << users.external_id[static_cast<std::size_t>(i)] << '\t'
        << (users.missing[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
  }
}

UserTable read_user_table(const std::string& path) {
  auto in = open_in(path);
  UserTable users;
  std::string line;
  std::vector<std::string> fields;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (!split_tabs(line, fields)) continue;
    if (fields.size() != 2 || (fields[1] != "0" && fields[1] != "1")) {
      fail(path, lineno, "expected 'external_id<TAB>0|1'");
    }
    users.add(fields[0], fields[1] == "1");
  }
  return users;
}

// --- embeddings ----------------------------------------------------------

namespace {

constexpr char kBinaryMagic[4] = {'E', 'G', 'E', 'B'};

void write_u32(std::ofstream& out, std::uint32_t v) {
  // Little-endian, explicitly.
  const unsigned char b[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError(path + ": truncated binary embedding file");
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f32(std::ofstream& out, float f) {
  std::uint32_t v;
  std::memcpy(&v, &f, 4);
  write_u32(out, v);
}

float read_f32(std::ifstream& in, const std::string& path) {
  const std::uint32_t v = read_u32(in, path);
  float f;
  std::memcpy(&f, &v, 4);
  return f;
}

}  // namespace

void write_embeddings(const std::string& path, const EmbeddingMatrix& emb,
                      const std::vector<std::string>& ids, bool binary) {
  if (static_cast<int>(ids.size()) != emb.n_rows) {
    throw std::invalid_argument("write_embeddings: id/row count mismatch");
  }
  if (binary) {
    auto out = open_out(path, true);
    out.write(kBinaryMagic, 4);
    write_u32(out, static_cast<std::uint32_t>(emb.n_rows));
    write_u32(out, static_cast<std::uint32_t>(emb.dim));
    for (int i = 0; i < emb.n_rows; ++i) {
      write_u32(out, static_cast<std::uint32_t>(ids[static_cast<std::size_t>(i)].size()));
      out.write(ids[static_cast<std::size_t>(i)].data(),
                static_cast<std::streamsize>(ids[static_cast<std::size_t>(i)].size()));
      const double* row = emb.row(i);
      for (int d = 0; d < emb.dim; ++d) write_f32(out, static_cast<float>(row[d]));
    }
    return;
  }
  auto out = open_out(path);
  out << emb.n_rows << ' ' << emb.dim << '\n';
  for (int i = 0; i < emb.n_rows; ++i) {
    out << ids[static_cast<std::size_t>(i)];
    const double* row = emb.row(i);
    for (int d = 0; d < emb.dim; ++d) out << ' ' << format_real(row[d]);
    out << '\n';
  }
}

EmbeddingFile read_embeddings(const std::string& path) {
  // Binary files are recognized by magic; everything else parses as text.
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw ParseError(path + ": cannot open for reading");
    char magic[4] = {0, 0, 0, 0};
    probe.read(magic, 4);
    if (probe.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0) {
      auto in = open_in(path, true);
      in.seekg(4);
      const std::uint32_t rows = read_u32(in, path);
      const std::uint32_t dim = read_u32(in, path);
      EmbeddingFile file;
      file.matrix = EmbeddingMatrix(static_cast<int>(rows), static_cast<int>(dim));
      file.ids.resize(rows);
      for (std::uint32_t i = 0; i < rows; ++i) {
        const std::uint32_t len = read_u32(in, path);
        std::string id(len, '\0');
        if (!in.read(id.data(), len)) {
          throw ParseError(path + ": truncated binary embedding file");
        }
        file.ids[i] = std::move(id);
        double* row = file.matrix.row(static_cast<int>(i));
        for (std::uint32_t d = 0; d < dim; ++d) {
          row[d] = static_cast<double>(read_f32(in, path));
        }
      }
      return file;
    }
  }
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty embedding file");
  std::istringstream header(strip_cr(line));
  long long rows = -1, dim = -1;
  header >> rows >> dim;
  if (rows < 0 || dim <= 0) fail(path, 1, "expected header 'n_rows dim'");
  EmbeddingFile file;
  file.matrix = EmbeddingMatrix(static_cast<int>(rows), static_cast<int>(dim));
  file.ids.resize(static_cast<std::size_t>(rows));
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) fail(path, static_cast<std::size_t>(i) + 2, "missing row");
    std::istringstream row(strip_cr(line));
    std::string id;
    if (!(row >> id)) fail(path, static_cast<std::size_t>(i) + 2, "missing id");
    file.ids[static_cast<std::size_t>(i)] = id;
    double* dst = file.matrix.row(static_cast<int>(i));
    for (long long d = 0; d < dim; ++d) {
      if (!(row >> dst[d])) {
        fail(path, static_cast<std::size_t>(i) + 2, "missing embedding value");
      }
    }
  }
  return file;
}

EmbeddingMatrix align_embeddings(const EmbeddingFile& file,
                                 const UserTable& users) {
  EmbeddingMatrix out(users.size(), file.matrix.dim);
  const std::vector<double> sentinel = EmbeddingMatrix::sentinel(file.matrix.dim);
  for (NodeId i = 0; i < users.size(); ++i) {
    std::copy(sentinel.begin(), sentinel.end(), out.row(i));
  }
  for (std::size_t r = 0; r < file.ids.size(); ++r) {
    const NodeId idx = users.find(file.ids[r]);
    if (idx < 0) {
      throw std::invalid_argument("align_embeddings: unknown user id '" +
                                  file.ids[r] + "'");
    }
    std::copy(file.matrix.row(static_cast<int>(r)),
              file.matrix.row(static_cast<int>(r)) + file.matrix.dim,
              out.row(idx));
  }
  return out;
}

// --- split plans ------------------------------------------------------------

void write_split_file(const std::string& path,
                      const std::vector<std::string>& article_ids,
                      const std::vector<SplitRole>& roles) {
  if (article_ids.size() != roles.size()) {
    throw std::invalid_argument("write_split_file: size mismatch");
  }
  auto out = open_out(path);
  for (std::size_t i = 0; i < article_ids.size(); ++i) {
    out << article_ids[i] << '\t' << to_string(roles[i]) << '\n';
  }
}

std::vector<std::pair<std::string, SplitRole>> read_split_file(
    const std::string& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::string, SplitRole>> out;
  std::string line;
  std::vector<std::string> fields;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (!split_tabs(line, fields)) continue;
    if (fields.size() != 2) fail(path, lineno, "expected 'article_id<TAB>role'");
    try {
      out.emplace_back(fields[0], split_role_from_string(fields[1]));
    } catch (const std::invalid_argument& e) {
      fail(path, lineno, e.what());
    }
  }
  return out;
}

// --- key-value files ----------------------------------------------------

void write_kv_file(const std::string& path, const KvReport& kv) {
  auto out = open_out(path);
  for (const auto& [k, v] : kv) out << k << '\t' << v << '\n';
}

KvReport read_kv_file(const std::string& path) {
  auto in = open_in(path);
  KvReport kv;
  std::string line;
  std::vector<std::string> fields;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (!split_tabs(line, fields)) continue;
    if (fields.size() != 2) fail(path, lineno, "expected 'key<TAB>value'");
    kv.emplace_back(fields[0], fields[1]);
  }
  return kv;
}

// --- walk corpus --------------------------------------------------------

void write_walk_corpus(const std::string& path, const WalkCorpus& corpus) {
  auto out = open_out(path);
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << walk[i];
    }
    out << '\n';
  }
}

// --- predictions ----------------------------------------------------------

void write_predictions(const std::string& path,
                       const std::vector<PredictionRow>& rows) {
  auto out = open_out(path);
  out << "article_id,probability,label\n";
  for (const auto& r : rows) {
    out << r.article_id << ',' << format_real(r.probability) << ','
        << to_string(r.label) << '\n';
  }
}

std::vector<PredictionRow> read_predictions(const std::string& path) {
  auto in = open_in(path);
  std::vector<PredictionRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "article_id,probability,label") {
        fail(path, lineno, "expected prediction CSV header");
      }
      header_seen = true;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1) fail(path, lineno, "expected 3 columns");
    PredictionRow r;
    r.article_id = line.substr(0, c1);
    r.probability = parse_real(line.substr(c1 + 1, c2 - c1 - 1), path, lineno);
    try {
      r.label = label_from_string(line.substr(c2 + 1));
    } catch (const std::invalid_argument& e) {
      fail(path, lineno, e.what());
    }
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(path + ": empty prediction file");
  return rows;
}

// --- vocabulary ---------------------------------------------------------

void write_vocabulary(const std::string& path, const TfidfModel& model) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < model.tokens.size(); ++i) {
    out << model.tokens[i] << '\t' << model.df[i] << '\t'
        << format_real(model.idf[i]) << '\n';
  }
}

// --- communities ------------------------------------------------------------

void write_communities(const std::string& path,
                       const std::vector<std::string>& ids,
                       const std::vector<int>& community) {
  if (ids.size() != community.size()) {
    throw std::invalid_argument("write_communities: size mismatch");
  }
  auto out = open_out(path);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << '\t' << community[i] << '\n';
  }
}

std::vector<std::pair<std::string, int>> read_communities(
    const std::string& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::string, int>> out;
  std::string line;
  std::vector<std::string> fields;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (!split_tabs(line, fields)) continue;
    if (fields.size() != 2) fail(path, lineno, "expected 'id<TAB>community'");
    out.emplace_back(fields[0],
                     static_cast<int>(parse_real(fields[1], path, lineno)));
  }
  return out;
}

// --- classifier -----------------------------------------------------------

void write_classifier(const std::string& path, const DenseClassifier& clf) {
  auto out = open_out(path);
  out << "dense_classifier " << clf.dim << '\n';
  auto line = [&](const char* name, const std::vector<double>& v) {
    out << name;
    for (double x : v) out << ' ' << format_real(x);
    out << '\n';
  };
  line("mean", clf.feat_mean);
  line("std", clf.feat_std);
  line("w", clf.w);
  out << "b " << format_real(clf.b) << '\n';
}

DenseClassifier read_classifier(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty classifier file");
  std::istringstream header(strip_cr(line));
  std::string tag;
  int dim = 0;
  header >> tag >> dim;
  if (tag != "dense_classifier" || dim < 1) fail(path, 1, "bad classifier header");
  DenseClassifier clf;
  clf.dim = dim;
  auto read_vec = [&](const char* name, std::vector<double>& v,
                      std::size_t lineno) {
    if (!std::getline(in, line)) fail(path, lineno, "missing section");
    std::istringstream s(strip_cr(line));
    std::string got;
    s >> got;
    if (got != name) fail(path, lineno, std::string("expected '") + name + "'");
    v.clear();
    double x;
    while (s >> x) v.push_back(x);
    if (static_cast<int>(v.size()) != dim) fail(path, lineno, "wrong vector length");
  };
  read_vec("mean", clf.feat_mean, 2);
  read_vec("std", clf.feat_std, 3);
  read_vec("w", clf.w, 4);
  if (!std::getline(in, line)) fail(path, 5, "missing bias");
  std::istringstream s(strip_cr(line));
  std::string got;
  s >> got;
  if (got != "b" || !(s >> clf.b)) fail(path, 5, "expected 'b <value>'");
  return clf;
}

}  // namespace echograph
