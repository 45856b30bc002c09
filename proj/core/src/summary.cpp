#include "vflite/summary.hpp"

#include "vflite/diag.hpp"

namespace vflite {

const char *summaryKindName(SummaryKind k) {
  switch (k) {
  case SummaryKind::Transfer:
    return "transfer";
  case SummaryKind::Input:
    return "input";
  case SummaryKind::Output:
    return "output";
  case SummaryKind::SourceSink:
    return "source_sink";
  case SummaryKind::Guard:
    return "guard";
  }
  return "?";
}

SummaryId SummaryStore::append(Summary s) {
  s.id = static_cast<SummaryId>(rows_.size());
  rows_.push_back(std::move(s));
  return rows_.back().id;
}

void SummaryStore::markStored(SummaryId id) {
  Summary &s = rows_[id];
  if (s.stored)
    return;
  if (s.owner == kNoFunc)
    throw AnalysisError("cannot store a summary without an owner");
  s.stored = true;
  storedByFunc_[s.owner].push_back(id);
}

std::vector<SummaryId> SummaryStore::storedOf(FuncId f, SummaryKind k) const {
  std::vector<SummaryId> out;
  for (SummaryId id : storedByFunc_[f])
    if (rows_[id].kind == k)
      out.push_back(id);
  return out;
}

} // namespace vflite
