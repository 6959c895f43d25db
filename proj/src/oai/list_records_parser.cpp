#include "oai/list_records_parser.hpp"

#include <expat.h>

#include <memory>

#include "common/error.hpp"
#include "common/text.hpp"

namespace archive_lens::oai {
namespace {

std::string_view local_name(std::string_view qname) {
  auto pos = qname.find(':');
  return pos == std::string_view::npos ? qname : qname.substr(pos + 1);
}

std::string dc_element_name(std::string_view qname) {
  if (text::starts_with(qname, "dc:")) return std::string(qname.substr(3));
  return std::string(qname);
}

const char* find_attr(const XML_Char** attrs, std::string_view wanted) {
  for (int i = 0; attrs[i] != nullptr; i += 2)
    if (local_name(attrs[i]) == wanted) return attrs[i + 1];
  return nullptr;
}

std::optional<long long> parse_count(const char* s) {
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != std::string_view(s).size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

enum class Capture { None, Identifier, Datestamp, SetSpec, DcValue, Token, Error };

class Handler {
 public:
  ListRecordsPage page;
  std::optional<std::string> error_code;
  std::string error_message;

  void start(const char* qname, const char** attrs) {
    ++depth_;
    auto local = local_name(qname);
    if (capture_ != Capture::None) return;  // nested markup inside a captured value

    if (!in_record_) {
      if (local == "record") {
        in_record_ = true;
        record_depth_ = depth_;
        current_ = RawRecord{};
      } else if (local == "resumptionToken") {
        begin_capture(Capture::Token);
        page.resumption.complete_list_size = parse_count(find_attr(attrs, "completeListSize"));
        page.resumption.cursor = parse_count(find_attr(attrs, "cursor"));
      } else if (local == "error" && !error_code) {
        const char* code = find_attr(attrs, "code");
        error_code = code ? code : "unknown";
        begin_capture(Capture::Error);
      }
      return;
    }

    if (depth_ == record_depth_ + 1) {
      if (local == "header") {
        in_header_ = true;
        const char* status = find_attr(attrs, "status");
        current_.deleted = status != nullptr && std::string_view(status) == "deleted";
      } else if (local == "metadata") {
        in_metadata_ = true;
      }
      return;
    }
    if (in_header_ && depth_ == record_depth_ + 2) {
      if (local == "identifier") begin_capture(Capture::Identifier);
      else if (local == "datestamp" || local == "timestamp") begin_capture(Capture::Datestamp);
      else if (local == "setSpec") begin_capture(Capture::SetSpec);
      return;
    }
    if (in_metadata_ && depth_ == record_depth_ + 3) {
      element_name_ = dc_element_name(qname);
      begin_capture(Capture::DcValue);
    }
  }

  void end(const char* qname) {
    if (capture_ != Capture::None && depth_ == capture_depth_) finish_capture();
    if (in_record_) {
      auto local = local_name(qname);
      if (depth_ == record_depth_) {
        page.records.push_back(std::move(current_));
        in_record_ = in_header_ = in_metadata_ = false;
      } else if (depth_ == record_depth_ + 1) {
        if (local == "header") in_header_ = false;
        if (local == "metadata") in_metadata_ = false;
      }
    }
    --depth_;
  }

  void characters(const char* s, int len) {
    if (capture_ != Capture::None) buffer_.append(s, static_cast<std::size_t>(len));
  }

 private:
  void begin_capture(Capture c) {
    capture_ = c;
    capture_depth_ = depth_;
    buffer_.clear();
  }

  void finish_capture() {
    std::string value(text::trim(buffer_));
    switch (capture_) {
      case Capture::Identifier: current_.identifier = std::move(value); break;
      case Capture::Datestamp: current_.datestamp = std::move(value); break;
      case Capture::SetSpec: current_.set_specs.push_back(std::move(value)); break;
      case Capture::DcValue: current_.dc_elements.push_back({element_name_, std::move(value)}); break;
      case Capture::Token:
        if (!value.empty()) page.resumption.token = std::move(value);
        break;
      case Capture::Error: error_message = std::move(value); break;
      case Capture::None: break;
    }
    capture_ = Capture::None;
  }

  int depth_ = 0;
  bool in_record_ = false;
  bool in_header_ = false;
  bool in_metadata_ = false;
  int record_depth_ = 0;
  RawRecord current_;
  Capture capture_ = Capture::None;
  int capture_depth_ = 0;
  std::string buffer_;
  std::string element_name_;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

Handler run_parser(std::string_view xml) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate(nullptr));
  if (!parser) throw Error(ErrorCode::MalformedXml, "cannot allocate XML parser");
  Handler handler;
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(
      parser.get(),
      [](void* ud, const XML_Char* name, const XML_Char** attrs) {
        static_cast<Handler*>(ud)->start(name, attrs);
      },
      [](void* ud, const XML_Char* name) { static_cast<Handler*>(ud)->end(name); });
  XML_SetCharacterDataHandler(parser.get(), [](void* ud, const XML_Char* s, int len) {
    static_cast<Handler*>(ud)->characters(s, len);
  });
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw Error(ErrorCode::MalformedXml,
                std::string("XML parse error at line ") +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  return handler;
}

}  // namespace

ListRecordsPage parse_list_records_page(std::string_view xml) {
  Handler h = run_parser(xml);
  if (h.error_code) {
    std::string msg = "OAI-PMH error " + *h.error_code;
    if (!h.error_message.empty()) msg += ": " + h.error_message;
    throw Error(ErrorCode::ProtocolError, msg, *h.error_code);
  }
  return std::move(h.page);
}

std::vector<RawRecord> parse_record_sequence(std::string_view xml) {
  if (text::starts_with(xml, "\xEF\xBB\xBF")) xml.remove_prefix(3);
  xml = text::trim(xml);
  if (text::starts_with(xml, "<?xml")) {
    auto end = xml.find("?>");
    if (end == std::string_view::npos) throw Error(ErrorCode::MalformedXml, "unterminated XML declaration");
    xml.remove_prefix(end + 2);
  }
  std::string wrapped;
  wrapped.reserve(xml.size() + 16);
  wrapped += "<dump>";
  wrapped += xml;
  wrapped += "</dump>";
  Handler h = run_parser(wrapped);
  return std::move(h.page.records);
}

}  // namespace archive_lens::oai
