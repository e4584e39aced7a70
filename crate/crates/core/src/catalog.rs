//! The built-in catalog of 25 forms across 8 domain categories.

use crate::schema::{DomainCategory, FieldSpec, FieldType, FormSchema};

/// Most fields a page of a multi-page form may hold.
pub const MAX_FIELDS_PER_PAGE: usize = 10;

fn text(id: &str, label: &str) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::StringInput)
}

fn desc(id: &str, label: &str) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::Description)
}

fn date(id: &str, label: &str) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::Date)
}

fn pick(id: &str, label: &str, options: &[&str]) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::Dropdown).with_options(options.iter().copied())
}

fn binary(id: &str, label: &str, options: [&str; 2]) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::BinaryChoice).with_options(options)
}

fn multi(id: &str, label: &str, options: &[&str]) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::MultipleChoice).with_options(options.iter().copied())
}

fn check(id: &str, label: &str) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::CheckboxInput)
}

fn number(id: &str, label: &str, min: f64, max: f64) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::NumericInput).with_range(min, max)
}

fn file(id: &str, label: &str) -> FieldSpec {
    FieldSpec::new(id, label, FieldType::FileUpload)
}

/// Assigns page indices in field order: single-page forms keep everything on
/// page 0; multi-page forms get `max(2, ceil(n / 10))` pages filled as evenly
/// as possible, earlier pages taking the remainder.
pub fn paginate(fields: &mut [FieldSpec], multi_page: bool) -> usize {
    let n = fields.len();
    if !multi_page || n < 2 {
        fields.iter_mut().for_each(|f| f.page_index = 0);
        return 1;
    }
    let pages = n.div_ceil(MAX_FIELDS_PER_PAGE).max(2);
    let base = n / pages;
    let extra = n % pages;
    let mut idx = 0;
    for page in 0..pages {
        let take = base + usize::from(page < extra);
        for field in &mut fields[idx..idx + take] {
            field.page_index = page;
        }
        idx += take;
    }
    pages
}

fn form(
    form_id: &str,
    name: &str,
    domain_category: DomainCategory,
    theme_id: &str,
    multi_page: bool,
    mut fields: Vec<FieldSpec>,
) -> FormSchema {
    let page_count = paginate(&mut fields, multi_page);
    FormSchema {
        form_id: form_id.to_string(),
        name: name.to_string(),
        domain_category,
        page_count,
        theme_id: theme_id.to_string(),
        fields,
    }
}

const YES_NO: [&str; 2] = ["Yes", "No"];

/// The 25 built-in forms, in catalog order.
pub fn builtin_catalog() -> Vec<FormSchema> {
    use DomainCategory::*;
    vec![
        form(
            "university_job_application",
            "Job Application for University Positions",
            AcademicResearch,
            "plain",
            false,
            vec![
                text("full_name", "Full Name").required(),
                text("email", "Email Address").required(),
                text("position_title", "Position Applied For").required(),
                desc("research_statement", "Research Statement"),
            ],
        ),
        form(
            "research_grant_application",
            "Grant or Research Funding Application",
            AcademicResearch,
            "plain",
            false,
            vec![
                text("project_title", "Project Title").required(),
                text("principal_investigator", "Principal Investigator").required(),
                date("start_date", "Proposed Start Date"),
                binary("prior_funding", "Received Prior Funding?", YES_NO),
                file("proposal_document", "Proposal Document"),
                check("ethics_confirmation", "Ethics Guidelines Confirmed"),
            ],
        ),
        form(
            "paper_submission",
            "Paper Submission Form",
            AcademicResearch,
            "plain",
            false,
            vec![
                text("title", "Paper Title").required(),
                text("authors", "Authors").required(),
                text("abstract", "Abstract").required(),
                text("keywords", "Keywords"),
                text("contact_email", "Corresponding Email").required(),
                pick(
                    "subject_area",
                    "Subject Area",
                    &[
                        "Computer Vision",
                        "Natural Language Processing",
                        "Machine Learning",
                        "Robotics",
                        "Human-Computer Interaction",
                        "Information Retrieval",
                    ],
                ),
                file("manuscript_file", "Manuscript PDF").unscored(),
            ],
        ),
        form(
            "course_registration",
            "Student Course Registration Form",
            AcademicResearch,
            "compact",
            false,
            vec![
                text("student_name", "Student Name").required(),
                text("student_id", "Student ID").required(),
                text("email", "Email Address"),
                pick(
                    "program",
                    "Degree Program",
                    &[
                        "Computer Science",
                        "Economics",
                        "Biology",
                        "History",
                        "Mathematics",
                    ],
                ),
                pick(
                    "semester",
                    "Semester",
                    &["Spring", "Summer", "Fall", "Winter"],
                ),
                multi(
                    "courses",
                    "Courses",
                    &["Algorithms", "Statistics", "Ethics", "Databases", "Writing"],
                ),
                desc("learning_goals", "Learning Goals"),
                text("advisor_name", "Academic Advisor"),
            ],
        ),
        form(
            "scholarship_application",
            "Scholarship Application for Students",
            AcademicResearch,
            "plain",
            true,
            vec![
                text("full_name", "Full Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("street_address", "Street Address"),
                text("city", "City"),
                text("university", "University"),
                text("major", "Major"),
                text("student_id", "Student ID"),
                pick(
                    "degree_level",
                    "Degree Level",
                    &["Bachelor", "Master", "Doctorate"],
                ),
                pick(
                    "year_of_study",
                    "Year of Study",
                    &[
                        "First Year",
                        "Second Year",
                        "Third Year",
                        "Fourth Year",
                        "Fifth Year",
                    ],
                ),
                pick(
                    "country",
                    "Country of Residence",
                    &[
                        "United States",
                        "Canada",
                        "Germany",
                        "India",
                        "Japan",
                        "Brazil",
                    ],
                ),
                desc("personal_statement", "Personal Statement"),
                desc("financial_need", "Financial Need"),
                desc("career_goals", "Career Goals"),
                file("transcript", "Academic Transcript"),
                file("recommendation_letter", "Recommendation Letter"),
            ],
        ),
        form(
            "startup_funding",
            "Startup Funding Application",
            ProfessionalBusiness,
            "plain",
            true,
            vec![
                text("company_name", "Company Name").required(),
                text("founder_name", "Founder Name").required(),
                text("email", "Contact Email").required(),
                text("phone", "Contact Phone"),
                text("website", "Company Website"),
                text("city", "Headquarters City"),
                pick(
                    "industry",
                    "Industry",
                    &[
                        "Fintech",
                        "Healthcare",
                        "Education",
                        "Retail",
                        "Energy",
                        "Logistics",
                    ],
                ),
                pick(
                    "business_stage",
                    "Business Stage",
                    &["Idea", "Prototype", "Seed", "Early Revenue", "Growth"],
                ),
                pick(
                    "legal_structure",
                    "Legal Structure",
                    &["LLC", "Corporation", "Partnership", "Sole Proprietorship"],
                ),
                date("founding_date", "Founding Date"),
                date("launch_date", "Product Launch Date"),
                number("employee_count", "Number of Employees", 1.0, 500.0),
                number(
                    "funding_requested",
                    "Funding Requested (USD)",
                    10000.0,
                    5000000.0,
                ),
                number("annual_revenue", "Annual Revenue (USD)", 0.0, 10000000.0),
                desc("business_description", "Business Description"),
                desc("use_of_funds", "Use of Funds"),
                file("pitch_deck", "Pitch Deck"),
                file("financial_statements", "Financial Statements"),
            ],
        ),
        form(
            "rental_application",
            "Real Estate Rental Application",
            ProfessionalBusiness,
            "compact",
            true,
            vec![
                text("applicant_name", "Applicant Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number").required(),
                text("current_address", "Current Address"),
                text("city", "City"),
                text("employer", "Employer"),
                text("job_title", "Job Title"),
                text("landlord_name", "Previous Landlord"),
                text("landlord_phone", "Landlord Phone"),
                text("emergency_contact", "Emergency Contact"),
                pick(
                    "property_type",
                    "Property Type",
                    &["Apartment", "House", "Townhouse", "Studio", "Condo"],
                ),
                pick(
                    "employment_status",
                    "Employment Status",
                    &[
                        "Employed",
                        "Self-Employed",
                        "Student",
                        "Retired",
                        "Unemployed",
                    ],
                ),
                pick(
                    "lease_term",
                    "Lease Term",
                    &["6 Months", "12 Months", "18 Months", "24 Months"],
                ),
                pick("pets", "Pets", &["None", "Cat", "Dog", "Other"]),
                date("move_in_date", "Desired Move-in Date"),
                date("date_of_birth", "Date of Birth"),
                number("monthly_income", "Monthly Income (USD)", 500.0, 50000.0),
                number("occupants", "Number of Occupants", 1.0, 8.0),
                number("desired_rent", "Desired Monthly Rent (USD)", 300.0, 10000.0),
                desc("rental_history", "Rental History"),
                desc("additional_notes", "Additional Notes"),
                file("id_document", "Photo ID"),
            ],
        ),
        form(
            "workshop_registration",
            "Educational Workshop Registration",
            ProfessionalBusiness,
            "dark",
            true,
            vec![
                text("participant_name", "Participant Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("organization", "Organization"),
                text("job_title", "Job Title"),
                text("city", "City"),
                text("country", "Country"),
                text("emergency_contact", "Emergency Contact"),
                text("emergency_phone", "Emergency Phone"),
                pick(
                    "workshop_track",
                    "Workshop Track",
                    &[
                        "Data Science",
                        "Leadership",
                        "Design Thinking",
                        "Cloud Computing",
                    ],
                ),
                pick(
                    "experience_level",
                    "Experience Level",
                    &["Beginner", "Intermediate", "Advanced"],
                ),
                pick("tshirt_size", "T-Shirt Size", &["S", "M", "L", "XL"]),
                pick(
                    "dietary_preference",
                    "Dietary Preference",
                    &["No Preference", "Vegetarian", "Vegan", "Gluten-Free"],
                ),
                date("session_date", "Session Date"),
                date("arrival_date", "Arrival Date"),
                desc("learning_objectives", "Learning Objectives"),
                desc("accessibility_needs", "Accessibility Needs"),
            ],
        ),
        form(
            "association_membership",
            "Association Membership Application",
            ProfessionalBusiness,
            "plain",
            true,
            vec![
                text("full_name", "Full Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("street_address", "Street Address"),
                text("city", "City"),
                text("postal_code", "Postal Code"),
                text("organization", "Organization"),
                text("job_title", "Job Title"),
                text("referee_name", "Referee Name"),
                text("referee_email", "Referee Email"),
                pick(
                    "membership_type",
                    "Membership Type",
                    &["Student", "Professional", "Corporate", "Lifetime"],
                ),
                pick(
                    "payment_method",
                    "Payment Method",
                    &["Credit Card", "Bank Transfer", "Invoice", "PayPal"],
                ),
                pick(
                    "region",
                    "Region",
                    &[
                        "North America",
                        "Europe",
                        "Asia Pacific",
                        "Latin America",
                        "Africa",
                    ],
                ),
                pick(
                    "committee_interest",
                    "Committee Interest",
                    &[
                        "Events",
                        "Publications",
                        "Outreach",
                        "Standards",
                        "Mentoring",
                    ],
                ),
                date("date_of_birth", "Date of Birth"),
                date("start_date", "Membership Start Date"),
                desc("motivation", "Motivation for Joining"),
                desc("professional_background", "Professional Background"),
                file("cv_file", "Curriculum Vitae"),
                check("code_of_conduct", "Accept Code of Conduct"),
            ],
        ),
        form(
            "art_exhibition_submission",
            "Art Exhibition Submission Form",
            ArtsCreative,
            "dark",
            true,
            vec![
                text("artist_name", "Artist Name").required(),
                text("email", "Email Address").required(),
                text("artwork_title", "Artwork Title").required(),
                text("website", "Portfolio Website"),
                pick(
                    "medium",
                    "Medium",
                    &[
                        "Oil",
                        "Acrylic",
                        "Watercolor",
                        "Photography",
                        "Sculpture",
                        "Digital",
                    ],
                ),
                pick(
                    "category",
                    "Category",
                    &["Emerging Artist", "Professional", "Student"],
                ),
                number("artwork_width_cm", "Artwork Width (cm)", 10.0, 400.0),
                number("price", "Asking Price (USD)", 50.0, 25000.0),
                desc("artist_statement", "Artist Statement"),
                file("artwork_image", "Artwork Image"),
                check("originality_confirmation", "Original Work Confirmation"),
            ],
        ),
        form(
            "literary_magazine_submission",
            "Literary Magazine Submission Form",
            ArtsCreative,
            "compact",
            true,
            vec![
                text("author_name", "Author Name").required(),
                text("email", "Email Address").required(),
                text("piece_title", "Title of Piece").required(),
                text("pen_name", "Pen Name"),
                text("phone", "Phone Number"),
                pick(
                    "genre",
                    "Genre",
                    &[
                        "Poetry",
                        "Fiction",
                        "Creative Nonfiction",
                        "Drama",
                        "Flash Fiction",
                    ],
                ),
                pick(
                    "submission_category",
                    "Submission Category",
                    &["General", "Contest", "Themed Issue"],
                ),
                desc("cover_letter", "Cover Letter"),
                desc("author_bio", "Author Biography"),
                file("manuscript", "Manuscript"),
                check("original_work", "Unpublished Original Work"),
            ],
        ),
        form(
            "conference_speaker_application",
            "Conference Speaker Application Form",
            ArtsCreative,
            "plain",
            true,
            vec![
                text("speaker_name", "Speaker Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("organization", "Organization"),
                text("job_title", "Job Title"),
                text("talk_title", "Talk Title").required(),
                binary("first_time_speaker", "First-time Speaker?", YES_NO),
                pick(
                    "talk_format",
                    "Talk Format",
                    &["Keynote", "Talk", "Workshop", "Panel", "Lightning"],
                ),
                pick(
                    "track",
                    "Track",
                    &["Design", "Engineering", "Business", "Research"],
                ),
                pick(
                    "audience_level",
                    "Audience Level",
                    &["Beginner", "Intermediate", "Advanced"],
                ),
                desc("talk_abstract", "Talk Abstract"),
                desc("speaker_bio", "Speaker Biography"),
                file("headshot", "Headshot Photo"),
                check("recording_consent", "Consent to Recording"),
            ],
        ),
        form(
            "bug_report",
            "Bug Reporting Form",
            TechnologySoftware,
            "dark",
            true,
            vec![
                text("reporter_name", "Reporter Name").required(),
                text("email", "Email Address").required(),
                text("software_version", "Software Version"),
                text("operating_system", "Operating System"),
                pick(
                    "severity",
                    "Severity",
                    &["Critical", "Major", "Minor", "Trivial"],
                ),
                pick(
                    "component",
                    "Component",
                    &[
                        "User Interface",
                        "Backend",
                        "Database",
                        "Authentication",
                        "Reporting",
                    ],
                ),
                pick(
                    "reproducibility",
                    "Reproducibility",
                    &["Always", "Sometimes", "Rarely", "Unable"],
                ),
                desc("bug_description", "Bug Description"),
                desc("steps_to_reproduce", "Steps to Reproduce"),
                file("screenshot", "Screenshot"),
            ],
        ),
        form(
            "it_support_request",
            "IT Support Request Form",
            TechnologySoftware,
            "compact",
            true,
            vec![
                text("requester_name", "Requester Name").required(),
                text("email", "Email Address").required(),
                text("department", "Department"),
                text("phone", "Phone Extension"),
                text("asset_tag", "Asset Tag"),
                pick(
                    "issue_category",
                    "Issue Category",
                    &[
                        "Hardware",
                        "Software",
                        "Network",
                        "Account Access",
                        "Printing",
                    ],
                ),
                pick("priority", "Priority", &["Low", "Medium", "High", "Urgent"]),
                pick(
                    "contact_method",
                    "Preferred Contact",
                    &["Email", "Phone", "Chat", "In Person"],
                ),
                number("users_affected", "Users Affected", 1.0, 1000.0),
                desc("issue_description", "Issue Description"),
                file("attachment", "Attachment"),
            ],
        ),
        form(
            "personal_loan_application",
            "Personal Loan Application Form",
            FinanceBanking,
            "plain",
            false,
            vec![
                text("applicant_name", "Applicant Name").required(),
                text("email", "Email Address").required(),
                text("employer", "Employer"),
                pick(
                    "loan_purpose",
                    "Loan Purpose",
                    &[
                        "Debt Consolidation",
                        "Home Improvement",
                        "Vehicle",
                        "Education",
                        "Medical",
                    ],
                ),
                pick(
                    "employment_status",
                    "Employment Status",
                    &["Employed", "Self-Employed", "Retired", "Student"],
                ),
                number("loan_amount", "Loan Amount (USD)", 1000.0, 100000.0),
                number("annual_income", "Annual Income (USD)", 10000.0, 500000.0),
            ],
        ),
        form(
            "bank_account_opening",
            "Bank Account Opening Form",
            FinanceBanking,
            "dark",
            false,
            vec![
                text("full_name", "Full Name").required(),
                text("email", "Email Address").required(),
                text("address", "Residential Address"),
                pick(
                    "account_type",
                    "Account Type",
                    &[
                        "Checking",
                        "Savings",
                        "Money Market",
                        "Certificate of Deposit",
                    ],
                ),
                date("date_of_birth", "Date of Birth"),
            ],
        ),
        form(
            "financial_planning_consultation",
            "Financial Planning Consultation Form",
            FinanceBanking,
            "compact",
            false,
            vec![
                text("client_name", "Client Name").required(),
                text("email", "Email Address").required(),
                pick(
                    "planning_goal",
                    "Planning Goal",
                    &[
                        "Retirement",
                        "Education Savings",
                        "Home Purchase",
                        "Wealth Growth",
                        "Tax Planning",
                    ],
                ),
                pick(
                    "risk_tolerance",
                    "Risk Tolerance",
                    &["Conservative", "Moderate", "Aggressive"],
                ),
                date("preferred_date", "Preferred Consultation Date"),
                desc("financial_situation", "Current Financial Situation"),
            ],
        ),
        form(
            "surgery_consent",
            "Patient Consent for Surgery",
            HealthcareMedical,
            "plain",
            false,
            vec![
                text("patient_name", "Patient Name").required(),
                text("surgeon_name", "Surgeon Name").required(),
                text("procedure_name", "Procedure").required(),
                text("hospital", "Hospital"),
                text("witness_name", "Witness Name"),
                date("surgery_date", "Surgery Date"),
                date("date_of_birth", "Date of Birth"),
                check("consent_confirmation", "I Consent to the Procedure"),
            ],
        ),
        form(
            "research_study_enrollment",
            "Medical Research Study Enrollment",
            HealthcareMedical,
            "dark",
            false,
            vec![
                text("participant_name", "Participant Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                pick(
                    "gender",
                    "Gender",
                    &["Female", "Male", "Non-binary", "Prefer not to say"],
                ),
                pick(
                    "study_arm",
                    "Study Arm",
                    &["Control", "Treatment A", "Treatment B"],
                ),
                number("age", "Age", 18.0, 90.0),
                number("weight_kg", "Weight (kg)", 40.0, 150.0),
                desc("medical_history", "Medical History"),
            ],
        ),
        form(
            "health_insurance_claim",
            "Health Insurance Claim Form",
            HealthcareMedical,
            "plain",
            true,
            vec![
                text("policyholder_name", "Policyholder Name").required(),
                text("policy_number", "Policy Number").required(),
                text("provider_name", "Provider Name"),
                text("email", "Email Address"),
                pick(
                    "claim_type",
                    "Claim Type",
                    &["Medical", "Dental", "Vision", "Pharmacy", "Hospitalization"],
                ),
                date("service_date", "Date of Service"),
                date("date_of_birth", "Date of Birth"),
                desc("treatment_description", "Treatment Description"),
                file("itemized_bill", "Itemized Bill").unscored(),
                file("medical_report", "Medical Report").unscored(),
            ],
        ),
        form(
            "nda_submission",
            "NDA Submission Form",
            LegalCompliance,
            "compact",
            false,
            vec![
                text("disclosing_party", "Disclosing Party").required(),
                text("receiving_party", "Receiving Party").required(),
                text("signatory_name", "Signatory Name"),
                text("jurisdiction", "Governing Jurisdiction"),
                date("effective_date", "Effective Date"),
                binary("agreement_type", "Agreement Type", ["Mutual", "One-way"]),
                desc("purpose", "Purpose of Disclosure"),
                number("term_years", "Term (years)", 1.0, 10.0),
                check("agree_terms", "Agree to Terms"),
            ],
        ),
        form(
            "background_check_authorization",
            "Background Check Auth. Form",
            LegalCompliance,
            "plain",
            false,
            vec![
                text("full_name", "Full Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("current_address", "Current Address"),
                text("city", "City"),
                text("previous_employer", "Previous Employer"),
                text("drivers_license", "Driver License Number"),
                date("date_of_birth", "Date of Birth"),
                date("authorization_date", "Authorization Date"),
                desc("employment_history", "Employment History"),
                check("authorization_consent", "I Authorize the Background Check"),
            ],
        ),
        form(
            "contractor_onboarding",
            "Contractor Onboarding Form",
            LegalCompliance,
            "dark",
            true,
            vec![
                text("contractor_name", "Contractor Name").required(),
                text("company_name", "Company Name"),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("tax_id", "Tax ID"),
                text("bank_name", "Bank Name"),
                pick(
                    "contract_type",
                    "Contract Type",
                    &["Fixed Price", "Time and Materials", "Retainer", "Milestone"],
                ),
                pick(
                    "payment_terms",
                    "Payment Terms",
                    &["Net 15", "Net 30", "Net 45", "Net 60"],
                ),
                date("start_date", "Start Date"),
                date("end_date", "End Date"),
                desc("scope_of_work", "Scope of Work"),
                file("w9_form", "Tax Form"),
                file("insurance_certificate", "Insurance Certificate"),
                check("policy_acknowledgement", "Acknowledge Company Policies"),
            ],
        ),
        form(
            "project_bid_submission",
            "Project Bid Submission Form",
            ConstructionManufacturing,
            "compact",
            true,
            vec![
                text("company_name", "Company Name").required(),
                text("contact_name", "Contact Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("project_name", "Project Name"),
                text("license_number", "Contractor License"),
                date("submission_date", "Submission Date"),
                date("completion_date", "Estimated Completion"),
                number("bid_amount", "Bid Amount (USD)", 10000.0, 10000000.0),
                number("crew_size", "Crew Size", 1.0, 200.0),
                desc("technical_approach", "Technical Approach"),
                file("bid_document", "Bid Document"),
                file("insurance_certificate", "Insurance Certificate"),
            ],
        ),
        form(
            "manufacturing_order",
            "Manufacturing Order Form",
            ConstructionManufacturing,
            "plain",
            true,
            vec![
                text("company_name", "Company Name").required(),
                text("contact_name", "Contact Name").required(),
                text("email", "Email Address").required(),
                text("phone", "Phone Number"),
                text("shipping_address", "Shipping Address"),
                text("product_sku", "Product SKU"),
                pick(
                    "material",
                    "Material",
                    &[
                        "Aluminum",
                        "Stainless Steel",
                        "ABS Plastic",
                        "Carbon Fiber",
                        "Brass",
                    ],
                ),
                pick(
                    "finish",
                    "Finish",
                    &["Matte", "Glossy", "Brushed", "Anodized"],
                ),
                pick(
                    "shipping_method",
                    "Shipping Method",
                    &["Ground", "Express", "Freight", "Pickup"],
                ),
                date("order_date", "Order Date"),
                date("delivery_date", "Requested Delivery"),
                desc("special_instructions", "Special Instructions"),
                file("design_file", "Design File"),
            ],
        ),
    ]
}

pub fn find_form<'a>(catalog: &'a [FormSchema], form_id: &str) -> Option<&'a FormSchema> {
    catalog.iter().find(|f| f.form_id == form_id)
}
