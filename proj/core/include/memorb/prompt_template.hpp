#pragma once

#include <map>
#include <string>
#include <string_view>

namespace memorb {

// `{name}` placeholder substitution, no nesting. "{{" and "}}" are literal
// braces. An unknown placeholder is an error at render time.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values);

std::string load_template_file(const std::string& path);  // throws StorageError

namespace templates {

// Built-in defaults; deployments may override via template files.
extern const char* kRawSystemPrompt;
extern const char* kReflectionPrompt;
extern const char* kRewritePrompt;
extern const char* kRewritePromptNoContext;
extern const char* kRecentSummaryPrompt;

}  // namespace templates

}  // namespace memorb
