#include "memorb/prompt_template.hpp"

#include <fstream>
#include <sstream>

#include "memorb/errors.hpp"

namespace memorb {

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    for (size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                out += '{';
                ++i;
                continue;
            }
            size_t close = tmpl.find('}', i + 1);
            if (close == std::string_view::npos)
                throw TemplateError("unterminated placeholder");
            std::string name(tmpl.substr(i + 1, close - i - 1));
            auto it = values.find(name);
            if (it == values.end())
                throw TemplateError("unknown placeholder {" + name + "}");
            out += it->second;
            i = close;
        } else if (c == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                out += '}';
                ++i;
                continue;
            }
            throw TemplateError("stray '}' in template");
        } else {
            out += c;
        }
    }
    return out;
}

std::string load_template_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot read template file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace templates {

const char* kRawSystemPrompt =
    "Basic Information\n"
    "You are now an e-commerce customer service representative. The platform "
    "you belong to is {platform}, the shop_id of your store is {shop_id}, and "
    "the user_id of the customer you serve is {user_id}.\n";

const char* kReflectionPrompt =
    "Basic Information\n"
    "You are now an e-commerce customer service representative. The platform "
    "you belong to is {platform}, the shop_id of your store is {shop_id}, and "
    "the user_id of the customer you serve is {user_id}. You will be given a "
    "past task execution history, in which you were placed in an e-commerce "
    "customer service environment and given a task to complete.\n"
    "\n"
    "Task Scenario\n"
    "{scenario_desc}\n"
    "\n"
    "Complete Execution History\n"
    "{formatted_messages}\n"
    "\n"
    "Performance Evaluation Result\n"
    "- Action tool score: {action_reward}/1.0\n"
    "- Search tool score: {search_reward}/1.0\n"
    "- Output score: {output_reward}/1.0\n"
    "- Overall result: {overall_result}\n"
    "\n"
    "Reflection on Historical Failures (if any)\n"
    "{memory_context}\n"
    "\n"
    "Reflection Guidance\n"
    "Instead of summarizing the environment, delve deeply into the strategies "
    "and paths you've taken to attempt to complete the task. Develop a concise "
    "and innovative action plan, focusing on learning from failure "
    "experiences:\n"
    "- Carefully analyze the error patterns in historical failure memories\n"
    "- Identify the key factors and decision points that lead to failure\n"
    "- Develop strategies to avoid repeating mistakes based on failure "
    "experiences\n"
    "\n"
    "Reflection Requirements (Focusing on Learning from Failure Experiences)\n"
    "1. Conduct in-depth analysis of key decision points and failure causes "
    "during the task execution process\n"
    "2. Identify specific issues in tool selection, parameter usage, and "
    "sequence arrangement\n"
    "3. Develop specific improvement plans, focusing on failure experiences:\n"
    "    - Analyze common error patterns in historical failed memories\n"
    "    - Identify the key factors leading to failure\n"
    "    - Develop strategies to avoid repeating the same mistakes\n"
    "4. Focus on the identification and avoidance of failure modes.\n"
    "5. Reflection should begin with \"I {result_verb} in this mission\"\n"
    "6. At the end of the reflection, clearly provide a summary of \"New "
    "Plan:\", which must be based on historical failure experiences and focus "
    "on avoiding known error patterns. Please provide a detailed and "
    "actionable reflection summary, focusing on learning from failure "
    "experiences and making improvements.\n";

const char* kRewritePrompt =
    "Rewrite the following customer query into a concise, retrieval-oriented "
    "question.\n"
    "\n"
    "Dialogue context:\n"
    "{context}\n"
    "\n"
    "Current query:\n"
    "{query}\n";

const char* kRewritePromptNoContext =
    "Rewrite the following customer query into a concise, retrieval-oriented "
    "question.\n"
    "\n"
    "Current query:\n"
    "{query}\n";

const char* kRecentSummaryPrompt =
    "Summarize the following recent reflections into one concise paragraph of "
    "reusable strategy advice.\n"
    "\n"
    "Recent reflections:\n"
    "{reflections}\n";

}  // namespace templates

}  // namespace memorb
