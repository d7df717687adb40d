#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "perseval/common/jsonl.h"
#include "perseval/corpus/annotation.h"

namespace perseval::corpus {

// Reads the normalized JSONL format: one {text_id, text, annotator_id,
// labels: [..]} object per line. Rows without labels are dropped and counted
// in provenance.log.dropped_empty. Unknown labels raise SchemaError; a repeated
// (text_id, annotator_id) pair raises IngestError.
AnnotationCorpus ingest(std::istream& in, const LabelSchema& schema,
                        const std::string& source_name = "<stream>");

AnnotationCorpus ingest_file(const std::filesystem::path& path, const LabelSchema& schema);

// Reads a raw CSV export (GoEmotions, Unhealthy Conversations) through the
// schema's import column mapping. A label cell counts as positive for
// "1", "1.0", "true" (any case).
AnnotationCorpus import_csv(std::istream& in, const LabelSchema& schema,
                            const std::string& source_name = "<stream>");

AnnotationCorpus import_csv_file(const std::filesystem::path& path, const LabelSchema& schema);

// Writes records in the normalized JSONL format (corpus order).
void write_corpus_jsonl(std::ostream& out, const AnnotationCorpus& corpus);

OrderedJson record_to_json(const AnnotationRecord& r, const LabelSchema& schema);
OrderedJson cleaning_log_to_json(const CleaningLog& log);

}  // namespace perseval::corpus
