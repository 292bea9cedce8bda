#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "jedi/json_tree.hpp"

namespace jedi {

// One rejected input line/file. Ingestion never throws on bad documents.
struct IngestError {
    std::int64_t id = -1;
    std::string source; // "line 3" or a filename
    std::string message;
};

// Owns a set of parsed documents keyed by integer id.
// JSON Lines ingestion assigns 0-based line numbers as ids; directory
// ingestion assigns indices over the sorted *.json filenames.
// Documents are parsed at ingest; failures are recorded, not fatal.
// Key-sorted variants are built lazily and cached.
class CorpusStore {
public:
    static CorpusStore from_jsonl_file(const std::string& path);
    static CorpusStore from_jsonl_text(const std::string& text);
    static CorpusStore from_directory(const std::string& path);

    std::size_t size() const { return docs_.size(); }
    std::vector<std::int64_t> ids() const;
    bool contains(std::int64_t id) const { return docs_.count(id) != 0; }
    const std::vector<IngestError>& errors() const { return errors_; }

    const std::string& raw(std::int64_t id) const;
    std::shared_ptr<const JsonTree> tree(std::int64_t id);
    std::shared_ptr<const JsonTree> sorted_tree(std::int64_t id);
    std::int64_t tree_size(std::int64_t id);

    // Ascending (size, id). Forces nothing: trees already exist.
    std::vector<std::pair<std::int64_t, std::int64_t>> size_table();

    // Nearest-rank quantile over tree sizes; ties resolve to the smaller id.
    std::int64_t quantile_doc(int percentile);

private:
    struct Entry {
        std::string raw;
        std::shared_ptr<const JsonTree> tree;
        std::shared_ptr<const JsonTree> sorted;
    };

    void add_document(std::int64_t id, std::string raw, const std::string& source);

    std::map<std::int64_t, Entry> docs_;
    std::vector<IngestError> errors_;
    std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

} // namespace jedi
