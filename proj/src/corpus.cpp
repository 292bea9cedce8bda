#include "jedi/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jedi {

void CorpusStore::add_document(std::int64_t id, std::string raw, const std::string& source) {
    try {
        auto tree = std::make_shared<const JsonTree>(parse_json_tree(raw));
        docs_[id] = Entry{std::move(raw), std::move(tree), nullptr};
    } catch (const ParseError& e) {
        errors_.push_back({id, source, e.what()});
    }
}

CorpusStore CorpusStore::from_jsonl_text(const std::string& text) {
    CorpusStore store;
    std::int64_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                    : nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (!blank)
            store.add_document(line_no, std::move(line), "line " + std::to_string(line_no + 1));
        if (nl == std::string::npos) break;
        pos = nl + 1;
        ++line_no;
    }
    return store;
}

CorpusStore CorpusStore::from_jsonl_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open corpus file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_jsonl_text(ss.str());
}

CorpusStore CorpusStore::from_directory(const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    CorpusStore store;
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::ifstream f(files[i], std::ios::binary);
        if (!f) {
            store.errors_.push_back({static_cast<std::int64_t>(i),
                                     files[i].filename().string(), "cannot open file"});
            continue;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        store.add_document(static_cast<std::int64_t>(i), ss.str(),
                           files[i].filename().string());
    }
    return store;
}

std::vector<std::int64_t> CorpusStore::ids() const {
    std::vector<std::int64_t> out;
    out.reserve(docs_.size());
    for (const auto& [id, e] : docs_) out.push_back(id);
    return out;
}

const std::string& CorpusStore::raw(std::int64_t id) const {
    auto it = docs_.find(id);
    if (it == docs_.end()) throw std::out_of_range("no document with id " + std::to_string(id));
    return it->second.raw;
}

std::shared_ptr<const JsonTree> CorpusStore::tree(std::int64_t id) {
    auto it = docs_.find(id);
    if (it == docs_.end()) throw std::out_of_range("no document with id " + std::to_string(id));
    return it->second.tree;
}

std::shared_ptr<const JsonTree> CorpusStore::sorted_tree(std::int64_t id) {
    auto it = docs_.find(id);
    if (it == docs_.end()) throw std::out_of_range("no document with id " + std::to_string(id));
    std::lock_guard<std::mutex> lock(*mu_);
    if (!it->second.sorted)
        it->second.sorted = std::make_shared<const JsonTree>(sort_tree(*it->second.tree));
    return it->second.sorted;
}

std::int64_t CorpusStore::tree_size(std::int64_t id) { return tree(id)->size(); }

std::vector<std::pair<std::int64_t, std::int64_t>> CorpusStore::size_table() {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(docs_.size());
    for (const auto& [id, e] : docs_) out.emplace_back(e.tree->size(), id);
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t CorpusStore::quantile_doc(int percentile) {
    auto table = size_table();
    if (table.empty()) throw std::runtime_error("corpus is empty");
    std::int64_t n = static_cast<std::int64_t>(table.size());
    std::int64_t rank = (static_cast<std::int64_t>(percentile) * n + 99) / 100; // ceil
    rank = std::clamp<std::int64_t>(rank, 1, n);
    return table[static_cast<std::size_t>(rank - 1)].second;
}

} // namespace jedi
