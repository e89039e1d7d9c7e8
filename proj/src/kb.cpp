#include "microfilter/kb.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

namespace microfilter {

namespace {

constexpr char kSnapshotMagic[4] = {'M', 'F', 'K', 'B'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!in) throw KbError("truncated KB snapshot");
  return value;
}

void write_string(std::ostream& out, const std::string& s) {
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  auto len = read_raw<std::uint32_t>(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw KbError("truncated KB snapshot");
  return s;
}

std::size_t count_words(const std::string& mention) {
  std::size_t words = mention.empty() ? 0 : 1;
  for (char c : mention)
    if (c == ' ') ++words;
  return words;
}

}  // namespace

std::string KnowledgeBase::normalize(const std::string& mention) {
  std::string out;
  out.reserve(mention.size());
  bool pending_space = false;
  for (unsigned char c : mention) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

KnowledgeBase KnowledgeBase::build(const std::vector<Record>& records) {
  KnowledgeBase kb;
  for (const auto& rec : records) {
    if (rec.pair_link_count <= 0 || rec.occurrence_count <= 0)
      throw KbError("KB record for mention '" + rec.mention +
                    "' has non-positive count");
    std::string mention = normalize(rec.mention);
    auto [it, inserted] = kb.mentions_.try_emplace(mention);
    MentionInfo& info = it->second;
    if (inserted) {
      info.occurrence = rec.occurrence_count;
    } else if (info.occurrence != rec.occurrence_count) {
      throw KbError("inconsistent occurrence_count for mention '" + mention +
                    "': " + std::to_string(info.occurrence) + " vs " +
                    std::to_string(rec.occurrence_count));
    }
    for (const auto& [entity, _] : info.entity_links) {
      if (entity == rec.entity)
        throw KbError("duplicate (mention, entity) pair: ('" + mention +
                      "', '" + rec.entity + "')");
    }
    info.entity_links.emplace_back(rec.entity, rec.pair_link_count);
    info.linked += rec.pair_link_count;
    if (info.linked > info.occurrence)
      throw KbError("mention '" + mention + "' link count " +
                    std::to_string(info.linked) + " exceeds occurrence count " +
                    std::to_string(info.occurrence));
    kb.entity_index_[rec.entity].push_back(mention);
    kb.max_mention_words_ = std::max(kb.max_mention_words_, count_words(mention));
  }
  return kb;
}

KnowledgeBase KnowledgeBase::from_tsv(std::istream& in) {
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Record rec;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    std::size_t t3 = t2 == std::string::npos ? t2 : line.find('\t', t2 + 1);
    if (t3 == std::string::npos)
      throw KbError("KB TSV line " + std::to_string(line_no) +
                    ": expected 4 tab-separated fields");
    rec.mention = line.substr(0, t1);
    rec.entity = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      rec.pair_link_count = std::stoll(line.substr(t2 + 1, t3 - t2 - 1));
      rec.occurrence_count = std::stoll(line.substr(t3 + 1));
    } catch (const std::exception&) {
      throw KbError("KB TSV line " + std::to_string(line_no) +
                    ": non-integer count");
    }
    records.push_back(std::move(rec));
  }
  return build(records);
}

double KnowledgeBase::link_probability(const std::string& mention) const {
  auto it = mentions_.find(mention);
  if (it == mentions_.end() || it->second.occurrence == 0) return 0.0;
  return static_cast<double>(it->second.linked) /
         static_cast<double>(it->second.occurrence);
}

double KnowledgeBase::commonness(const std::string& mention,
                                 const std::string& entity) const {
  auto it = mentions_.find(mention);
  if (it == mentions_.end() || it->second.linked == 0) return 0.0;
  for (const auto& [e, n] : it->second.entity_links)
    if (e == entity)
      return static_cast<double>(n) / static_cast<double>(it->second.linked);
  return 0.0;
}

const std::vector<std::pair<std::string, std::int64_t>>*
KnowledgeBase::entities_of(const std::string& mention) const {
  auto it = mentions_.find(mention);
  if (it == mentions_.end()) return nullptr;
  return &it->second.entity_links;
}

std::vector<std::pair<std::string, double>> KnowledgeBase::surface_forms(
    const std::string& entity) const {
  std::vector<std::pair<std::string, double>> forms;
  auto it = entity_index_.find(entity);
  if (it == entity_index_.end()) return forms;
  forms.reserve(it->second.size());
  for (const auto& mention : it->second)
    forms.emplace_back(mention, commonness(mention, entity));
  std::sort(forms.begin(), forms.end());
  return forms;
}

bool KnowledgeBase::has_mention(const std::string& mention) const {
  return mentions_.count(mention) > 0;
}

std::vector<std::string> KnowledgeBase::mentions() const {
  std::vector<std::string> out;
  out.reserve(mentions_.size());
  for (const auto& [m, _] : mentions_) out.push_back(m);
  std::sort(out.begin(), out.end());
  return out;
}

KnowledgeBase::Stats KnowledgeBase::stats() const {
  Stats s;
  s.mentions = mentions_.size();
  s.entities = entity_index_.size();
  for (const auto& [_, info] : mentions_) s.pairs += info.entity_links.size();
  return s;
}

void KnowledgeBase::save_snapshot(std::ostream& out) const {
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  write_raw<std::uint32_t>(out, kSnapshotVersion);
  write_raw<std::uint64_t>(out, mentions_.size());
  for (const auto& mention : mentions()) {
    const MentionInfo& info = mentions_.at(mention);
    write_string(out, mention);
    write_raw<std::int64_t>(out, info.occurrence);
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(info.entity_links.size()));
    for (const auto& [entity, n] : info.entity_links) {
      write_string(out, entity);
      write_raw<std::int64_t>(out, n);
    }
  }
}

KnowledgeBase KnowledgeBase::load_snapshot(std::istream& in) {
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0)
    throw KbError("not a KB snapshot (bad magic)");
  auto version = read_raw<std::uint32_t>(in);
  if (version != kSnapshotVersion)
    throw KbError("unsupported KB snapshot version " + std::to_string(version));
  auto n_mentions = read_raw<std::uint64_t>(in);
  std::vector<Record> records;
  for (std::uint64_t i = 0; i < n_mentions; ++i) {
    std::string mention = read_string(in);
    auto occurrence = read_raw<std::int64_t>(in);
    auto n_entities = read_raw<std::uint32_t>(in);
    for (std::uint32_t j = 0; j < n_entities; ++j) {
      Record rec;
      rec.mention = mention;
      rec.entity = read_string(in);
      rec.pair_link_count = read_raw<std::int64_t>(in);
      rec.occurrence_count = occurrence;
      records.push_back(std::move(rec));
    }
  }
  return build(records);
}

}  // namespace microfilter
